#pragma once

#include <optional>
#include <string>
#include <vector>

#include "respond/errors.hpp"
#include "respond/stats.hpp"

namespace respond {

// Response category per assessment. Bestness order: CR > PR > SD > PD > NE.
enum class ResponseCategory { CR, PR, SD, PD, NE };

int category_rank(ResponseCategory c);
bool is_response(ResponseCategory c);
std::string to_string(ResponseCategory c);
ResponseCategory category_from_string(const std::string& token);  // throws ParseError

struct Assessment {
    int day = 0;  // days since treatment start; post-baseline, so day >= 1
    ResponseCategory category = ResponseCategory::NE;
};

struct PatientRecord {
    std::string id;
    bool baseline_measurable = true;
    std::vector<Assessment> assessments;  // strictly increasing days
    std::optional<int> death_day;
    std::optional<int> new_therapy_day;
    std::optional<int> treatment_stop_day;
    int cutoff_day = 0;
};

// Throws ValidationError if a PatientRecord invariant is broken.
void validate(const PatientRecord& patient);

struct BorConfig {
    bool require_confirmation = false;
    int min_confirmation_gap_days = 28;
    bool allow_ne_between_confirmation = true;
    bool truncate_at_new_therapy = true;
    bool truncate_at_progression = true;
};

struct BorResult {
    ResponseCategory bor = ResponseCategory::NE;
    std::optional<int> onset_day;        // first qualifying PR/CR
    std::optional<int> progression_day;  // first PD over the whole record
    bool is_responder = false;
};

struct OrrResult {
    int n_responders = 0;
    int n_total = 0;          // evaluable patients
    int n_not_evaluable = 0;  // excluded (no measurable disease at baseline)
    double proportion = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 1.0;
};

// Assessments usable for response derivation: before new therapy (when
// truncation is on), up to and including the first PD, and within the cutoff.
std::vector<Assessment> eligible_assessments(const PatientRecord& patient, const BorConfig& cfg);

// Best overall response, onset of response and first progression.
// Throws NotEvaluable when baseline_measurable is false.
BorResult derive_bor(const PatientRecord& patient, const BorConfig& cfg);

// Cohort ORR with an exact (Clopper-Pearson) 95% CI. Non-evaluable patients
// are excluded and counted. Throws EmptyPopulation when nothing is evaluable.
OrrResult compute_orr(const std::vector<PatientRecord>& patients, const BorConfig& cfg);

}  // namespace respond
