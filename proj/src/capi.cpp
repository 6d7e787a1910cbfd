#include <heatlab/heatlab.h>

#include "config.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "geometry.hpp"
#include "report.hpp"

#include <json.hpp>

#include <new>
#include <string>

struct heatlab_manifold {
    heatlab::RadialManifold m;
};

struct heatlab_report {
    heatlab::ExperimentReport report;
    std::string json;
    std::string csv;
    std::string timing;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_json;

heatlab_status record(heatlab_status status, const std::string& message)
{
    g_error = message;
    g_error_json = heatlab::stable_json({{"error", heatlab_status_name(status)},
                                         {"message", message},
                                         {"status", static_cast<int>(status)}});
    return status;
}

// Runs body, translating every exception into a status.
template <class F>
heatlab_status guarded(F&& body)
{
    try {
        body();
        g_error.clear();
        g_error_json.clear();
        return HEATLAB_OK;
    } catch (const heatlab::Error& e) {
        return record(static_cast<heatlab_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return record(HEATLAB_INTERNAL_ERROR, "out of memory");
    } catch (const std::exception& e) {
        return record(HEATLAB_INTERNAL_ERROR, e.what());
    }
}

void need(const void* p, const char* what)
{
    if (!p)
        throw heatlab::InvalidArgument(std::string(what) + " is null");
}

nlohmann::json parse_document(const char* text, const char* what)
{
    need(text, what);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw heatlab::InvalidArgument(std::string(what) + " is not valid JSON: " + e.what());
    }
}

}  // namespace

extern "C" {

const char* heatlab_version(void) { return heatlab::kToolVersion; }

const char* heatlab_config_schema(void) { return heatlab::config_schema_text().c_str(); }

const char* heatlab_status_name(heatlab_status status)
{
    switch (status) {
    case HEATLAB_OK: return "ok";
    case HEATLAB_INVALID_ARGUMENT: return "invalid-argument";
    case HEATLAB_RANGE_ERROR: return "range-error";
    case HEATLAB_NUMERICAL_FAILURE: return "numerical-failure";
    case HEATLAB_IO_ERROR: return "io-error";
    case HEATLAB_INTERNAL_ERROR: return "internal-error";
    }
    return "unknown";
}

const char* heatlab_last_error(void) { return g_error.c_str(); }

const char* heatlab_last_error_json(void) { return g_error_json.c_str(); }

heatlab_status heatlab_manifold_create(const char* spec_json, heatlab_manifold** out)
{
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        const auto spec = parse_document(spec_json, "manifold spec");
        *out = new heatlab_manifold{heatlab::manifold_from_json(spec)};
    });
}

void heatlab_manifold_destroy(heatlab_manifold* m) { delete m; }

heatlab_status heatlab_manifold_log_area(const heatlab_manifold* m, double r, double* out)
{
    return guarded([&] {
        need(m, "manifold");
        need(out, "out");
        *out = m->m.log_area(r);
    });
}

heatlab_status heatlab_perimeter_ball(const heatlab_manifold* m, double r, double* out)
{
    return guarded([&] {
        need(m, "manifold");
        need(out, "out");
        *out = heatlab::perimeter_ball(m->m, r);
    });
}

heatlab_status heatlab_ball_volume(const heatlab_manifold* m, double r, double* out)
{
    return guarded([&] {
        need(m, "manifold");
        need(out, "out");
        *out = heatlab::ball_volume(m->m, r);
    });
}

heatlab_status heatlab_run(const char* config_json, const char* experiment, unsigned threads,
                           const uint64_t* seed, heatlab_report** out)
{
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        auto doc = parse_document(config_json, "config");
        if (!doc.is_object())
            throw heatlab::InvalidArgument("config /: expected an object");
        if (experiment) {
            heatlab::parse_experiment(experiment);
            if (!doc.contains("experiment"))
                doc["experiment"] = experiment;
            else if (doc["experiment"] != experiment)
                throw heatlab::InvalidArgument("config /experiment: '" + doc["experiment"].dump()
                                               + "' does not match the requested experiment '"
                                               + experiment + "'");
        }
        if (seed)
            doc["seed"] = *seed;
        const heatlab::RunConfig cfg = heatlab::resolve_config(std::move(doc));
        const unsigned workers = threads == 0 ? 1 : threads;
        auto* r = new heatlab_report{heatlab::run_experiment(cfg, {workers}), {}, {}, {}};
        r->json = heatlab::stable_json(heatlab::report_document(r->report));
        r->csv = heatlab::to_csv(r->report.table);
        r->timing = heatlab::stable_json(heatlab::timing_document(r->report, workers));
        *out = r;
    });
}

const char* heatlab_report_experiment(const heatlab_report* r)
{
    return r ? r->report.experiment.c_str() : "";
}

const char* heatlab_report_verdict(const heatlab_report* r)
{
    return r ? r->report.verdict.c_str() : "";
}

int heatlab_report_flagged(const heatlab_report* r) { return r && r->report.flagged ? 1 : 0; }

const char* heatlab_report_json(const heatlab_report* r) { return r ? r->json.c_str() : ""; }

const char* heatlab_report_csv(const heatlab_report* r) { return r ? r->csv.c_str() : ""; }

const char* heatlab_report_timing_json(const heatlab_report* r)
{
    return r ? r->timing.c_str() : "";
}

double heatlab_report_wall_seconds(const heatlab_report* r)
{
    return r ? r->report.wall_seconds : 0.0;
}

void heatlab_report_destroy(heatlab_report* r) { delete r; }

}  // extern "C"
