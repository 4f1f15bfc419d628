#pragma once

#include <cstdint>
#include <vector>

#include "respond/domain.hpp"

namespace respond {

// Multi-state trial generator: stable -> response, stable -> progression,
// stable -> death, response -> progression, response -> death, all with
// exponential latent times. State changes are observed at the first scheduled
// assessment on/after the latent transition; death is observed exactly.
//
// Reproducibility: patient i draws from an mt19937_64 stream seeded with
// splitmix64(seed, i), so cohorts are byte-identical for a given seed
// regardless of evaluation order.
struct TrialSimConfig {
    int n_patients = 0;
    double hazard_response = 0.0;          // per day, from stable
    double hazard_progression_pre = 0.0;   // per day, from stable
    double hazard_progression_post = 0.0;  // per day, from response
    double hazard_death = 0.0;             // per day, from either state
    double prob_new_therapy_at_pd = 0.0;
    std::vector<int> assessment_days;      // strictly increasing; default schedule if empty
    int cutoff_day = 0;
    std::uint64_t seed = 0;

    void validate() const;  // throws InvalidConfig

    // Cycles of 28 days assessed at cycles 3, 5, 7 and then every 3 cycles,
    // up to the cutoff.
    static std::vector<int> default_schedule(int cutoff_day);
};

std::vector<PatientRecord> simulate_trial(const TrialSimConfig& cfg);

// Closed-form latent-time truths for an exponential configuration.
struct TrueSummaries {
    double hazard_any_pre = 0.0;      // response + progression + death
    double hazard_any_post = 0.0;     // post-response progression + death
    double p_response = 0.0;          // P(response before progression/death)
    double post_response_median_days = 0.0;

    double response_cif(double t_days) const;
    double pbir(double t_days) const;
    double edor_months(double tau_days) const;
};

TrueSummaries true_summaries(const TrialSimConfig& cfg);

// splitmix64 seed derivation, exposed so replicate seeds can be documented
// and tested.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace respond
