#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "respond/estimand.hpp"

namespace respond {

enum class CiTransform { Linear, Log, LogLog };
std::string to_string(CiTransform t);
CiTransform ci_transform_from_string(const std::string& s);  // throws InvalidConfig

enum class CurveKind { Survival, Incidence, InResponse };

// Right-continuous step function with pointwise standard errors and CIs.
// Survival curves start at 1 before the first listed time, incidence and
// in-response curves at 0.
struct StepCurve {
    CurveKind kind = CurveKind::Survival;
    CiTransform ci_transform = CiTransform::Log;
    double conf_level = 0.95;
    int n_subjects = 0;
    std::vector<double> times;      // days of estimate changes
    std::vector<double> estimates;
    std::vector<double> std_errs;
    std::vector<double> ci_lower;
    std::vector<double> ci_upper;
    std::vector<int> n_risk;
    std::vector<int> n_event;
    std::vector<double> censor_times;  // for tick marks
    double max_time = 0.0;             // latest observed time (event or censoring)

    double baseline() const { return kind == CurveKind::Survival ? 1.0 : 0.0; }
    double at(double t_days) const;
};

struct LandmarkEstimate {
    double t_days = 0.0;
    double estimate = 1.0;
    double ci_lower = 1.0;
    double ci_upper = 1.0;
    bool beyond_follow_up = false;
};

struct MedianEstimate {
    std::optional<double> median_days;
    std::optional<double> ci_lower;
    std::optional<double> ci_upper;
    bool reached = false;
};

// Kaplan-Meier product-limit estimate with Greenwood variance. Ties resolve
// events before censorings. Throws CompetingCodePresent when the data carry
// competing-event codes and EmptyPopulation on empty input.
StepCurve km_fit(std::span<const SurvivalDatum> data, CiTransform transform = CiTransform::Log);

// Right-continuous evaluation with CI; flags evaluation beyond follow-up.
LandmarkEstimate km_at(const StepCurve& curve, double t_days);

// Smallest time with S(t) <= 0.5 (midpoint when S hits 0.5 exactly); CI by
// inversion of the pointwise interval (Brookmeyer-Crowley style).
MedianEstimate km_median(const StepCurve& curve);

// Aalen-Johansen cumulative incidence for one event type. `target` selects a
// competing code; nullopt targets the primary Event status. Variance by the
// standard counting-process (Marubini-Valsecchi) formula.
StepCurve aj_fit(std::span<const SurvivalDatum> data,
                 std::optional<CompetingCode> target = std::nullopt,
                 CiTransform transform = CiTransform::LogLog);

// Probability of being in response: difference of the progression/death-free
// KM curve and the KM curve of time to response-or-progression-or-death,
// clipped to [0,1]. Standard errors are the conservative sum of the two KM
// standard errors.
StepCurve pbir_fit(const std::vector<PatientRecord>& patients, const EstimandSpec& spec,
                   CiTransform transform = CiTransform::Log);

struct EdorResult {
    double months = 0.0;
    bool tau_beyond_follow_up = false;
};

// Exact step-function integral of a PBIR curve over [0, tau].
EdorResult edor(const StepCurve& pbir_curve, double tau_days);

struct EstimandReport {
    std::string spec_name;
    std::string description;
    std::string population;
    std::string endpoint;      // "dor" | "ttr"
    std::string estimator;     // "kaplan_meier" | "cumulative_incidence" | "pbir"
    CiTransform ci_transform = CiTransform::Log;
    int n = 0;
    int n_events = 0;
    int n_censored = 0;
    int n_competing = 0;
    int n_not_evaluable = 0;
    std::map<std::string, int> censor_reasons;
    std::optional<MedianEstimate> median;      // days
    std::optional<LandmarkEstimate> landmark;  // days
    std::optional<double> edor_months;
    std::optional<double> tau_months;
    bool tau_beyond_follow_up = false;
    // CIF reports follow the 1-CIF presentation convention of the case study
    bool complemented = false;
};

struct SummarizeOptions {
    std::optional<double> landmark_days;  // overrides the spec default
    std::optional<double> tau_days;
    std::optional<CiTransform> ci_transform;
};

// Routes a cohort through the estimator chain the spec asks for and packages
// the result. Errors from derivation and estimation propagate.
EstimandReport summarize(const std::vector<PatientRecord>& patients, const EstimandSpec& spec,
                         const SummarizeOptions& options = {});

}  // namespace respond
