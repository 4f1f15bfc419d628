#include "respond/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "respond/stats.hpp"

namespace respond {

namespace {

constexpr double kMedianEps = 1e-12;

struct TimeGroup {
    double time;
    int d_all = 0;      // events of any type
    int d_target = 0;   // events of the target type (aj)
    int censored = 0;
};

// Group sorted data by time; events and censorings at the same time stay in
// one group, events acting first.
template <typename Pred>
std::vector<TimeGroup> group_times(std::span<const SurvivalDatum> data, Pred is_target) {
    std::vector<const SurvivalDatum*> ptrs;
    ptrs.reserve(data.size());
    for (const auto& d : data) ptrs.push_back(&d);
    std::sort(ptrs.begin(), ptrs.end(), [](const SurvivalDatum* a, const SurvivalDatum* b) {
        return a->time_days < b->time_days;
    });
    std::vector<TimeGroup> groups;
    for (const auto* d : ptrs) {
        if (groups.empty() || groups.back().time != d->time_days)
            groups.push_back({static_cast<double>(d->time_days)});
        auto& g = groups.back();
        if (d->is_censored()) {
            ++g.censored;
        } else {
            ++g.d_all;
            if (is_target(*d)) ++g.d_target;
        }
    }
    return groups;
}

double z_value(double conf_level) {
    return stats::normal_quantile(0.5 + conf_level / 2.0);
}

// Pointwise CI for a probability estimate with Greenwood-style variance.
// `se_log` is the standard error of log(est) (survival case); for incidence
// curves se refers to the estimate itself and the log transform falls back to
// the delta method.
void ci_for(CiTransform tr, double est, double se, double z, double& lo, double& hi) {
    if (est <= 0.0) {
        lo = hi = 0.0;
        return;
    }
    if (se <= 0.0) {
        lo = hi = est;
        // a degenerate curve at 1 keeps the trivial interval
        return;
    }
    switch (tr) {
        case CiTransform::Linear:
            lo = est - z * se;
            hi = est + z * se;
            break;
        case CiTransform::Log: {
            double se_log = se / est;
            lo = est * std::exp(-z * se_log);
            hi = est * std::exp(z * se_log);
            break;
        }
        case CiTransform::LogLog: {
            if (est >= 1.0) {
                lo = hi = 1.0;
                break;
            }
            double theta = z * se / (est * std::fabs(std::log(est)));
            lo = std::pow(est, std::exp(theta));
            hi = std::pow(est, std::exp(-theta));
            break;
        }
    }
    lo = std::clamp(lo, 0.0, 1.0);
    hi = std::clamp(hi, 0.0, 1.0);
}

// First time the step curve drops to <= 0.5; midpoint interpolation when the
// curve sits at 0.5 exactly.
std::optional<double> minmin(const std::vector<double>& times, const std::vector<double>& values) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (values[i] < 0.5 - kMedianEps) return times[i];
        if (std::fabs(values[i] - 0.5) <= kMedianEps) {
            for (std::size_t j = i + 1; j < times.size(); ++j)
                if (values[j] < values[i] - kMedianEps) return 0.5 * (times[i] + times[j]);
            return times[i];
        }
    }
    return std::nullopt;
}

}  // namespace

std::string to_string(CiTransform t) {
    switch (t) {
        case CiTransform::Linear: return "linear";
        case CiTransform::Log: return "log";
        case CiTransform::LogLog: return "loglog";
    }
    return "log";
}

CiTransform ci_transform_from_string(const std::string& s) {
    if (s == "linear") return CiTransform::Linear;
    if (s == "log") return CiTransform::Log;
    if (s == "loglog" || s == "log-log") return CiTransform::LogLog;
    throw InvalidConfig("unknown ci transform '" + s + "' (linear, log, loglog)");
}

double StepCurve::at(double t_days) const {
    double v = baseline();
    for (std::size_t i = 0; i < times.size() && times[i] <= t_days; ++i) v = estimates[i];
    return v;
}

StepCurve km_fit(std::span<const SurvivalDatum> data, CiTransform transform) {
    if (data.empty()) throw EmptyPopulation("km_fit: no data");
    for (const auto& d : data)
        if (d.status == SurvivalDatum::Status::Competing)
            throw CompetingCodePresent("km_fit: competing-event codes present; use aj_fit");

    auto groups = group_times(data, [](const SurvivalDatum&) { return true; });
    StepCurve c;
    c.kind = CurveKind::Survival;
    c.ci_transform = transform;
    c.n_subjects = static_cast<int>(data.size());
    const double z = z_value(c.conf_level);

    double s = 1.0;
    double greenwood = 0.0;  // sum d / (n (n - d))
    int at_risk = c.n_subjects;
    for (const auto& g : groups) {
        c.max_time = g.time;
        if (g.censored > 0) c.censor_times.push_back(g.time);
        if (g.d_all > 0) {
            s *= static_cast<double>(at_risk - g.d_all) / at_risk;
            if (at_risk - g.d_all > 0)
                greenwood += static_cast<double>(g.d_all) /
                             (static_cast<double>(at_risk) * (at_risk - g.d_all));
            double se = s > 0.0 ? s * std::sqrt(greenwood) : 0.0;
            double lo = s, hi = s;
            ci_for(transform, s, se, z, lo, hi);
            c.times.push_back(g.time);
            c.estimates.push_back(s);
            c.std_errs.push_back(se);
            c.ci_lower.push_back(lo);
            c.ci_upper.push_back(hi);
            c.n_risk.push_back(at_risk);
            c.n_event.push_back(g.d_all);
        }
        at_risk -= g.d_all + g.censored;
    }
    return c;
}

LandmarkEstimate km_at(const StepCurve& curve, double t_days) {
    LandmarkEstimate r;
    r.t_days = t_days;
    r.estimate = curve.baseline();
    r.ci_lower = r.ci_upper = r.estimate;
    for (std::size_t i = 0; i < curve.times.size() && curve.times[i] <= t_days; ++i) {
        r.estimate = curve.estimates[i];
        r.ci_lower = curve.ci_lower[i];
        r.ci_upper = curve.ci_upper[i];
    }
    r.beyond_follow_up = t_days > curve.max_time;
    return r;
}

MedianEstimate km_median(const StepCurve& curve) {
    MedianEstimate m;
    if (curve.kind == CurveKind::Incidence) {
        // median of the event-time distribution: first time CIF >= 0.5
        std::vector<double> compl_;
        compl_.reserve(curve.estimates.size());
        for (double e : curve.estimates) compl_.push_back(1.0 - e);
        m.median_days = minmin(curve.times, compl_);
        std::vector<double> lo_c, hi_c;
        for (double e : curve.ci_upper) lo_c.push_back(1.0 - e);
        for (double e : curve.ci_lower) hi_c.push_back(1.0 - e);
        m.ci_lower = minmin(curve.times, lo_c);
        m.ci_upper = minmin(curve.times, hi_c);
    } else {
        m.median_days = minmin(curve.times, curve.estimates);
        m.ci_lower = minmin(curve.times, curve.ci_lower);
        m.ci_upper = minmin(curve.times, curve.ci_upper);
    }
    m.reached = m.median_days.has_value();
    return m;
}

StepCurve aj_fit(std::span<const SurvivalDatum> data, std::optional<CompetingCode> target,
                 CiTransform transform) {
    if (data.empty()) throw EmptyPopulation("aj_fit: no data");
    auto is_target = [&](const SurvivalDatum& d) {
        if (!target) return d.status == SurvivalDatum::Status::Event;
        return d.status == SurvivalDatum::Status::Competing && d.competing_code == *target;
    };
    auto groups = group_times(data, is_target);

    StepCurve c;
    c.kind = CurveKind::Incidence;
    c.ci_transform = transform;
    c.n_subjects = static_cast<int>(data.size());
    const double z = z_value(c.conf_level);

    // pass 1: increments of the CIF and the overall KM just before each time
    struct Row {
        double time;
        int n, d_all, d_k;
        double s_before, cif;
    };
    std::vector<Row> rows;
    double s = 1.0;
    double cif = 0.0;
    int at_risk = c.n_subjects;
    for (const auto& g : groups) {
        c.max_time = g.time;
        if (g.censored > 0) c.censor_times.push_back(g.time);
        if (g.d_all > 0) {
            cif += s * static_cast<double>(g.d_target) / at_risk;
            rows.push_back({g.time, at_risk, g.d_all, g.d_target, s, cif});
            s *= static_cast<double>(at_risk - g.d_all) / at_risk;
        }
        at_risk -= g.d_all + g.censored;
    }
    // pass 2: counting-process variance of the CIF at each event time
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double F_t = rows[i].cif;
        double var = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
            const auto& r = rows[j];
            const double a = F_t - r.cif;
            const double n = r.n;
            if (r.n - r.d_all > 0)
                var += a * a * r.d_all / (n * (n - r.d_all));
            var += r.s_before * r.s_before * ((n - r.d_k) / n) * r.d_k / (n * n);
            var -= 2.0 * a * r.s_before * r.d_k / (n * n);
        }
        var = std::max(var, 0.0);
        double se = std::sqrt(var);
        double lo = F_t, hi = F_t;
        ci_for(transform, F_t, se, z, lo, hi);
        c.times.push_back(rows[i].time);
        c.estimates.push_back(F_t);
        c.std_errs.push_back(se);
        c.ci_lower.push_back(lo);
        c.ci_upper.push_back(hi);
        c.n_risk.push_back(rows[i].n);
        c.n_event.push_back(rows[i].d_k);
    }
    return c;
}

namespace {

// Datum for the two PBIR component curves, honoring the spec's new-therapy
// censoring for both.
SurvivalDatum pbir_component(const PatientRecord& p, const EstimandSpec& spec,
                             bool include_response) {
    auto bor = derive_bor(p, spec.bor_cfg);
    std::optional<int> event_day;
    if (include_response && bor.onset_day) event_day = bor.onset_day;
    if (bor.progression_day && (!event_day || *bor.progression_day < *event_day))
        event_day = bor.progression_day;
    if (p.death_day && (!event_day || *p.death_day < *event_day)) event_day = p.death_day;

    const bool censor_at_nt = spec.strategy_new_therapy == IceStrategy::Hypothetical ||
                              spec.strategy_new_therapy == IceStrategy::WhileOn;
    if (censor_at_nt && p.new_therapy_day && (!event_day || *p.new_therapy_day < *event_day)) {
        auto la = last_adequate_assessment(p, 0, p.new_therapy_day);
        return SurvivalDatum::censored(p.id, la.value_or(0), CensorReason::NewTherapy);
    }
    if (event_day) return SurvivalDatum::event(p.id, *event_day);
    auto la = last_adequate_assessment(p, 0);
    return SurvivalDatum::censored(p.id, la.value_or(0), CensorReason::Administrative);
}

}  // namespace

StepCurve pbir_fit(const std::vector<PatientRecord>& patients, const EstimandSpec& spec,
                   CiTransform transform) {
    if (patients.empty()) throw EmptyPopulation("pbir_fit: empty cohort");
    std::vector<SurvivalDatum> to_event;      // progression or death
    std::vector<SurvivalDatum> to_first;      // response, progression or death
    for (const auto& p : patients) {
        try {
            to_event.push_back(pbir_component(p, spec, false));
            to_first.push_back(pbir_component(p, spec, true));
        } catch (const NotEvaluable&) {
            // skipped, consistent with derive_cohort
        }
    }
    if (to_event.empty()) throw EmptyPopulation("pbir_fit: no evaluable patients");
    StepCurve sd = km_fit(to_event, transform);
    StepCurve srd = km_fit(to_first, transform);

    StepCurve c;
    c.kind = CurveKind::InResponse;
    c.ci_transform = CiTransform::Linear;  // conservative band is additive
    c.n_subjects = static_cast<int>(to_event.size());
    c.max_time = std::max(sd.max_time, srd.max_time);
    const double z = z_value(c.conf_level);

    std::vector<double> merged = sd.times;
    merged.insert(merged.end(), srd.times.begin(), srd.times.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

    auto se_at = [](const StepCurve& curve, double t) {
        double se = 0.0;
        for (std::size_t i = 0; i < curve.times.size() && curve.times[i] <= t; ++i)
            se = curve.std_errs[i];
        return se;
    };
    for (double t : merged) {
        double diff = sd.at(t) - srd.at(t);
        double v = std::max(diff, 0.0);  // crossing estimates clip at zero
        double se = se_at(sd, t) + se_at(srd, t);
        c.times.push_back(t);
        c.estimates.push_back(v);
        c.std_errs.push_back(se);
        c.ci_lower.push_back(std::clamp(v - z * se, 0.0, 1.0));
        c.ci_upper.push_back(std::clamp(v + z * se, 0.0, 1.0));
        c.n_risk.push_back(0);
        c.n_event.push_back(0);
    }
    c.censor_times = sd.censor_times;
    return c;
}

EdorResult edor(const StepCurve& pbir_curve, double tau_days) {
    EdorResult r;
    r.tau_beyond_follow_up = tau_days > pbir_curve.max_time;
    double total = 0.0;
    double prev_t = 0.0;
    double prev_v = pbir_curve.baseline();
    for (std::size_t i = 0; i < pbir_curve.times.size(); ++i) {
        double t = pbir_curve.times[i];
        if (t >= tau_days) break;
        total += prev_v * (t - prev_t);
        prev_t = t;
        prev_v = pbir_curve.estimates[i];
    }
    total += prev_v * (tau_days - prev_t);
    r.months = stats::days_to_months(total);
    return r;
}

EstimandReport summarize(const std::vector<PatientRecord>& patients, const EstimandSpec& spec,
                         const SummarizeOptions& options) {
    spec.validate();
    EstimandReport rep;
    rep.spec_name = spec.name;
    rep.description = spec.description;
    rep.population = spec.population_label();
    rep.endpoint = spec.endpoint == Endpoint::Dor ? "dor" : "ttr";
    CiTransform tr = options.ci_transform.value_or(CiTransform::Log);
    rep.ci_transform = tr;
    auto landmark = options.landmark_days ? options.landmark_days : spec.summary.landmark_days;
    auto tau = options.tau_days ? options.tau_days : spec.summary.tau_days;

    if (spec.summary.estimator == SummaryEstimator::ProbabilityInResponse) {
        rep.estimator = "pbir";
        StepCurve curve = pbir_fit(patients, spec, tr);
        rep.n = curve.n_subjects;
        if (landmark) rep.landmark = km_at(curve, *landmark);
        if (tau) {
            auto e = edor(curve, *tau);
            rep.edor_months = e.months;
            rep.tau_months = stats::days_to_months(*tau);
            rep.tau_beyond_follow_up = e.tau_beyond_follow_up;
        }
        return rep;
    }

    auto cohort = derive_cohort(patients, spec);
    rep.n = static_cast<int>(cohort.data.size());
    rep.n_not_evaluable = static_cast<int>(cohort.not_evaluable_ids.size());
    if (cohort.data.empty())
        throw EmptyPopulation("spec '" + spec.name + "': derived population is empty");
    for (const auto& d : cohort.data) {
        switch (d.status) {
            case SurvivalDatum::Status::Event: ++rep.n_events; break;
            case SurvivalDatum::Status::Censored:
                ++rep.n_censored;
                ++rep.censor_reasons[to_string(d.censor_reason.value_or(
                    CensorReason::Administrative))];
                break;
            case SurvivalDatum::Status::Competing: ++rep.n_competing; break;
        }
    }

    if (spec.summary.estimator == SummaryEstimator::CumulativeIncidence) {
        rep.estimator = "cumulative_incidence";
        rep.complemented = true;  // present 1-CIF, the case-study convention
        StepCurve curve = aj_fit(cohort.data, std::nullopt,
                                 options.ci_transform.value_or(CiTransform::LogLog));
        rep.ci_transform = options.ci_transform.value_or(CiTransform::LogLog);
        if (spec.summary.report_median) rep.median = km_median(curve);
        if (landmark) {
            auto lm = km_at(curve, *landmark);
            std::swap(lm.ci_lower, lm.ci_upper);
            lm.estimate = 1.0 - lm.estimate;
            lm.ci_lower = 1.0 - lm.ci_lower;
            lm.ci_upper = 1.0 - lm.ci_upper;
            rep.landmark = lm;
        }
        return rep;
    }

    rep.estimator = "kaplan_meier";
    StepCurve curve = km_fit(cohort.data, tr);
    if (spec.summary.report_median) rep.median = km_median(curve);
    if (landmark) rep.landmark = km_at(curve, *landmark);
    return rep;
}

}  // namespace respond
