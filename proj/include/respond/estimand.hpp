#pragma once

#include <optional>
#include <string>
#include <vector>

#include "respond/domain.hpp"

namespace respond {

enum class Endpoint { Dor, Ttr };
enum class PopulationRule { RespondersOnly, AllPatients };

// Intercurrent-event strategies. Hypothetical and WhileOn censor identically
// for new therapy; the label is kept distinct for reporting.
enum class IceStrategy { TreatmentPolicy, Hypothetical, WhileOn, Composite };

// Handling of progression/death in TTR derivations (DOR always composites).
enum class ProgressionDeathStrategy { CompositeEvent, CompetingEvent, MaxFollowUpCensor };

enum class NonResponderRule { Exclude, ZeroDuration };

enum class CompetingCode { Progression, Death, NewTherapy };
std::string to_string(CompetingCode code);

enum class CensorReason { Administrative, NewTherapy, MaxFollowUp };
std::string to_string(CensorReason r);

struct SurvivalDatum {
    enum class Status { Event, Censored, Competing };
    std::string patient_id;
    int time_days = 0;
    Status status = Status::Censored;
    std::optional<CompetingCode> competing_code;  // set iff status == Competing
    std::optional<CensorReason> censor_reason;    // set iff status == Censored

    bool is_event() const { return status == Status::Event; }
    bool is_censored() const { return status == Status::Censored; }
    static SurvivalDatum event(std::string id, int t) {
        return {std::move(id), t, Status::Event, std::nullopt, std::nullopt};
    }
    static SurvivalDatum censored(std::string id, int t, CensorReason why) {
        return {std::move(id), t, Status::Censored, std::nullopt, why};
    }
    static SurvivalDatum competing(std::string id, int t, CompetingCode code) {
        return {std::move(id), t, Status::Competing, code, std::nullopt};
    }
};

enum class SummaryEstimator { KaplanMeier, CumulativeIncidence, ProbabilityInResponse };

struct SummarySpec {
    SummaryEstimator estimator = SummaryEstimator::KaplanMeier;
    bool report_median = true;
    std::optional<double> landmark_days;  // e.g. 182.625 for the 6-month rate
    std::optional<double> tau_days;       // EDOR truncation
};

// One column of the duration-of-response / time-to-response estimand tables.
struct EstimandSpec {
    std::string name;
    std::string description;
    Endpoint endpoint = Endpoint::Dor;
    PopulationRule population = PopulationRule::RespondersOnly;
    IceStrategy strategy_new_therapy = IceStrategy::Hypothetical;
    ProgressionDeathStrategy strategy_progression_death = ProgressionDeathStrategy::CompositeEvent;
    IceStrategy strategy_discontinuation = IceStrategy::TreatmentPolicy;
    NonResponderRule nonresponder_rule = NonResponderRule::Exclude;
    SummarySpec summary;
    BorConfig bor_cfg;

    void validate() const;  // throws InvalidConfig
    std::string population_label() const;
};

// Duration of response for one patient, or nullopt when the patient does not
// enter the analysis population. Throws SpecMismatch if spec.endpoint != Dor
// and NotEvaluable for patients without measurable disease.
std::optional<SurvivalDatum> derive_dor(const PatientRecord& patient, const EstimandSpec& spec);

// Time to response for one patient. max_follow_up_days is the cohort constant
// used by the max-follow-up censoring rule (Table-3-style estimand 2).
std::optional<SurvivalDatum> derive_ttr(const PatientRecord& patient, const EstimandSpec& spec,
                                        int max_follow_up_days);

struct CohortDerivation {
    std::vector<SurvivalDatum> data;              // ordered by patient id
    std::vector<std::string> not_evaluable_ids;   // skipped with a warning
    int max_follow_up_days = 0;                   // latest observed day in the cohort
};

// Applies the per-patient derivation over a cohort. Throws EmptyPopulation on
// an empty input.
CohortDerivation derive_cohort(const std::vector<PatientRecord>& patients,
                               const EstimandSpec& spec);

// Latest observed day (assessment, death, progression or new therapy) over the
// cohort; the "maximum follow-up time of the study".
int max_follow_up(const std::vector<PatientRecord>& patients);

// The eight canonical specs, in table order: dor_traditional, dor_tp,
// dor_while_on, edor, time_in_response, ttr_traditional, ttr_tp_maxfu, ttr_cif.
std::vector<EstimandSpec> builtin_specs();
const EstimandSpec& builtin_spec(const std::string& name);  // throws InvalidConfig

// Last assessment with category != NE at or after `from_day` and strictly
// before `before_day` (when given); nullopt if there is none.
std::optional<int> last_adequate_assessment(const PatientRecord& patient, int from_day,
                                            std::optional<int> before_day = std::nullopt);

}  // namespace respond
