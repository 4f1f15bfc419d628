#include "respond/estimand.hpp"

#include <algorithm>

#include "respond/errors.hpp"

namespace respond {

std::string to_string(CompetingCode code) {
    switch (code) {
        case CompetingCode::Progression: return "progression";
        case CompetingCode::Death: return "death";
        case CompetingCode::NewTherapy: return "new_therapy";
    }
    return "progression";
}

std::string to_string(CensorReason r) {
    switch (r) {
        case CensorReason::Administrative: return "administrative";
        case CensorReason::NewTherapy: return "new_therapy";
        case CensorReason::MaxFollowUp: return "max_follow_up";
    }
    return "administrative";
}

void EstimandSpec::validate() const {
    if (strategy_discontinuation != IceStrategy::TreatmentPolicy)
        throw InvalidConfig("spec '" + name +
                            "': treatment discontinuation supports the treatment-policy "
                            "strategy only");
    if (population == PopulationRule::RespondersOnly &&
        nonresponder_rule != NonResponderRule::Exclude)
        throw InvalidConfig("spec '" + name +
                            "': responders-only population requires nonresponder_rule=exclude");
    if (endpoint == Endpoint::Ttr && nonresponder_rule != NonResponderRule::Exclude)
        throw InvalidConfig("spec '" + name + "': TTR does not use a zero-duration rule");
    if (endpoint == Endpoint::Dor &&
        strategy_progression_death != ProgressionDeathStrategy::CompositeEvent)
        throw InvalidConfig("spec '" + name +
                            "': DOR treats progression/death as a composite event");
}

std::string EstimandSpec::population_label() const {
    return population == PopulationRule::RespondersOnly ? "Responders" : "All patients";
}

std::optional<int> last_adequate_assessment(const PatientRecord& patient, int from_day,
                                            std::optional<int> before_day) {
    std::optional<int> last;
    for (const auto& a : patient.assessments) {
        if (a.day > patient.cutoff_day) break;
        if (before_day && a.day >= *before_day) break;
        if (a.category != ResponseCategory::NE && a.day >= from_day) last = a.day;
    }
    return last;
}

namespace {

// Earliest of first progression and death, if any.
std::optional<std::pair<int, CompetingCode>> composite_event_day(const PatientRecord& p,
                                                                 const BorResult& bor) {
    std::optional<std::pair<int, CompetingCode>> ev;
    if (bor.progression_day) ev = {*bor.progression_day, CompetingCode::Progression};
    if (p.death_day && (!ev || *p.death_day < ev->first))
        ev = {*p.death_day, CompetingCode::Death};
    return ev;
}

}  // namespace

std::optional<SurvivalDatum> derive_dor(const PatientRecord& patient, const EstimandSpec& spec) {
    if (spec.endpoint != Endpoint::Dor)
        throw SpecMismatch("derive_dor called with a non-DOR spec '" + spec.name + "'");
    spec.validate();
    auto bor = derive_bor(patient, spec.bor_cfg);
    if (!bor.is_responder) {
        if (spec.population == PopulationRule::RespondersOnly ||
            spec.nonresponder_rule == NonResponderRule::Exclude)
            return std::nullopt;
        return SurvivalDatum::event(patient.id, 0);  // time in response: 0 for non-responders
    }
    const int onset = *bor.onset_day;
    auto event = composite_event_day(patient, bor);

    const bool censor_at_new_therapy = spec.strategy_new_therapy == IceStrategy::Hypothetical ||
                                       spec.strategy_new_therapy == IceStrategy::WhileOn;
    if (censor_at_new_therapy && patient.new_therapy_day &&
        (!event || *patient.new_therapy_day < event->first)) {
        // censored at the last adequate assessment prior to the start of new therapy
        auto la = last_adequate_assessment(patient, onset, patient.new_therapy_day);
        int day = la.value_or(onset);
        return SurvivalDatum::censored(patient.id, day - onset, CensorReason::NewTherapy);
    }
    if (spec.strategy_new_therapy == IceStrategy::Composite && patient.new_therapy_day &&
        (!event || *patient.new_therapy_day < event->first)) {
        // treatment-failure reading: start of new therapy ends the response
        return SurvivalDatum::event(patient.id, *patient.new_therapy_day - onset);
    }
    if (event) return SurvivalDatum::event(patient.id, event->first - onset);
    auto la = last_adequate_assessment(patient, onset);
    return SurvivalDatum::censored(patient.id, la.value_or(onset) - onset,
                                   CensorReason::Administrative);
}

std::optional<SurvivalDatum> derive_ttr(const PatientRecord& patient, const EstimandSpec& spec,
                                        int max_follow_up_days) {
    if (spec.endpoint != Endpoint::Ttr)
        throw SpecMismatch("derive_ttr called with a non-TTR spec '" + spec.name + "'");
    spec.validate();
    auto bor = derive_bor(patient, spec.bor_cfg);
    if (bor.is_responder) return SurvivalDatum::event(patient.id, *bor.onset_day);
    if (spec.population == PopulationRule::RespondersOnly) return std::nullopt;

    // non-responder in an all-patients TTR estimand
    auto terminal = composite_event_day(patient, bor);
    if (spec.strategy_progression_death == ProgressionDeathStrategy::MaxFollowUpCensor) {
        if (terminal)
            return SurvivalDatum::censored(patient.id, max_follow_up_days,
                                           CensorReason::MaxFollowUp);
        auto la = last_adequate_assessment(patient, 0);
        return SurvivalDatum::censored(patient.id, la.value_or(0), CensorReason::Administrative);
    }
    if (spec.strategy_progression_death == ProgressionDeathStrategy::CompetingEvent) {
        auto first = terminal;
        if (patient.new_therapy_day && (!first || *patient.new_therapy_day < first->first))
            first = {{*patient.new_therapy_day, CompetingCode::NewTherapy}};
        if (first)
            return SurvivalDatum::competing(patient.id, first->first, first->second);
        auto la = last_adequate_assessment(patient, 0);
        return SurvivalDatum::censored(patient.id, la.value_or(0), CensorReason::Administrative);
    }
    throw SpecMismatch("spec '" + spec.name +
                       "': all-patients TTR needs a max-follow-up or competing-event strategy");
}

int max_follow_up(const std::vector<PatientRecord>& patients) {
    int m = 0;
    for (const auto& p : patients) {
        for (const auto& a : p.assessments)
            if (a.day <= p.cutoff_day) m = std::max(m, a.day);
        if (p.death_day) m = std::max(m, *p.death_day);
        if (p.new_therapy_day) m = std::max(m, *p.new_therapy_day);
    }
    return m;
}

CohortDerivation derive_cohort(const std::vector<PatientRecord>& patients,
                               const EstimandSpec& spec) {
    if (patients.empty()) throw EmptyPopulation("derive_cohort: empty cohort");
    CohortDerivation out;
    out.max_follow_up_days = max_follow_up(patients);
    for (const auto& p : patients) {
        try {
            auto d = spec.endpoint == Endpoint::Dor
                         ? derive_dor(p, spec)
                         : derive_ttr(p, spec, out.max_follow_up_days);
            if (d) out.data.push_back(std::move(*d));
        } catch (const NotEvaluable&) {
            out.not_evaluable_ids.push_back(p.id);
        }
    }
    std::sort(out.data.begin(), out.data.end(),
              [](const SurvivalDatum& a, const SurvivalDatum& b) {
                  return a.patient_id < b.patient_id;
              });
    return out;
}

std::vector<EstimandSpec> builtin_specs() {
    std::vector<EstimandSpec> v;
    const double six_months = stats::months_to_days(6.0);
    const double tau = stats::months_to_days(9.2);

    EstimandSpec s;
    s.summary.landmark_days = six_months;

    s.name = "dor_traditional";
    s.description = "cDOR among responders; new anticancer therapy handled hypothetically";
    s.endpoint = Endpoint::Dor;
    s.population = PopulationRule::RespondersOnly;
    s.strategy_new_therapy = IceStrategy::Hypothetical;
    s.strategy_progression_death = ProgressionDeathStrategy::CompositeEvent;
    s.nonresponder_rule = NonResponderRule::Exclude;
    s.summary.estimator = SummaryEstimator::KaplanMeier;
    v.push_back(s);

    s.name = "dor_tp";
    s.description = "cDOR among responders regardless of new anticancer therapy";
    s.strategy_new_therapy = IceStrategy::TreatmentPolicy;
    v.push_back(s);

    s.name = "dor_while_on";
    s.description = "cDOR among responders while not having started new anticancer therapy";
    s.strategy_new_therapy = IceStrategy::WhileOn;
    v.push_back(s);

    s.name = "edor";
    s.description = "Expected duration of response (area under the in-response probability)";
    s.population = PopulationRule::AllPatients;
    s.strategy_new_therapy = IceStrategy::Hypothetical;
    s.nonresponder_rule = NonResponderRule::Exclude;
    s.summary.estimator = SummaryEstimator::ProbabilityInResponse;
    s.summary.report_median = false;
    s.summary.tau_days = tau;
    v.push_back(s);

    s.name = "time_in_response";
    s.description = "Time in response over all patients (0 for non-responders)";
    s.nonresponder_rule = NonResponderRule::ZeroDuration;
    s.summary.estimator = SummaryEstimator::KaplanMeier;
    s.summary.report_median = true;
    s.summary.tau_days.reset();
    v.push_back(s);

    s = EstimandSpec{};
    s.summary.landmark_days = six_months;
    s.name = "ttr_traditional";
    s.description = "cTTR among responders";
    s.endpoint = Endpoint::Ttr;
    s.population = PopulationRule::RespondersOnly;
    s.strategy_new_therapy = IceStrategy::WhileOn;
    s.strategy_progression_death = ProgressionDeathStrategy::CompetingEvent;
    v.push_back(s);

    s.name = "ttr_tp_maxfu";
    s.description = "TTR over all patients; progression/death censored at maximum follow-up";
    s.population = PopulationRule::AllPatients;
    s.strategy_new_therapy = IceStrategy::TreatmentPolicy;
    s.strategy_progression_death = ProgressionDeathStrategy::MaxFollowUpCensor;
    v.push_back(s);

    s.name = "ttr_cif";
    s.description = "TTR over all patients; progression, death and new therapy as competing events";
    s.strategy_new_therapy = IceStrategy::WhileOn;
    s.strategy_progression_death = ProgressionDeathStrategy::CompetingEvent;
    s.summary.estimator = SummaryEstimator::CumulativeIncidence;
    v.push_back(s);

    return v;
}

const EstimandSpec& builtin_spec(const std::string& name) {
    static const std::vector<EstimandSpec> specs = builtin_specs();
    for (const auto& s : specs)
        if (s.name == name) return s;
    std::string names;
    for (const auto& s : specs) names += (names.empty() ? "" : ", ") + s.name;
    throw InvalidConfig("unknown estimand spec '" + name + "' (valid: " + names + ")");
}

}  // namespace respond
