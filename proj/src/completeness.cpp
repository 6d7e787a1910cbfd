#include "experiment_support.hpp"

namespace heatlab {

using nlohmann::json;

ExperimentReport completeness_probe(const RunConfig& cfg, const RunOptions&)
{
    const RadialManifold& m = cfg.manifold;
    const RadialBVDatum one[] = {RadialBVDatum::constant_one()};
    const double times[] = {cfg.t};
    const ExhaustionRun run = run_exhaustion(m, one, times, cfg.controls);

    CsvTable table{{"R", "m_at_0"}, {}};
    std::vector<SeriesPoint> series;
    json levels = json::array();
    for (const auto& lv : run.levels) {
        const double v = lv.probes[0][0].value_at_pole;
        table.rows.push_back({lv.radius, v});
        series.push_back({1.0 / lv.radius, v});
        levels.push_back({{"R", lv.radius}, {"m_at_0", v}});
    }

    const double last = series.back().value;
    const double tail_change =
        series.size() >= 2 ? std::abs(last - series[series.size() - 2].value) : INFINITY;
    Extrapolation ex;
    if (series.size() >= 3) {
        ex = aitken_limit(series);
    } else {
        ex.estimate = last;
        ex.error_indicator = 0.0;
        ex.method = "none";
    }

    const double eps = cfg.criteria.completeness_epsilon;
    const double stab = cfg.criteria.stability_tolerance;
    // A stable tail: the last exhaustion step and the extrapolation both
    // move m(t,0) by no more than the stability tolerance.
    const bool stable = tail_change <= stab && ex.error_indicator <= stab && !ex.low_confidence;
    ExperimentReport r;
    if (ex.estimate >= 1.0 - eps)
        r.verdict = "complete";
    else if (ex.estimate <= 1.0 - 10.0 * eps && stable)
        r.verdict = "incomplete";
    else
        r.verdict = "inconclusive";
    r.flagged = r.verdict == "inconclusive";
    r.body = {{"manifold", m.describe()},
              {"t", cfg.t},
              {"levels", levels},
              {"m_at_0_used", last},
              {"extrapolation", detail::extrapolation_json(ex)},
              {"tail_change", tail_change},
              {"stable_tail", stable},
              {"epsilon", eps},
              {"stability_tolerance", stab},
              {"exhaustion", detail::exhaustion_json(run)}};
    r.table = std::move(table);
    return r;
}

}  // namespace heatlab
