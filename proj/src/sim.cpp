#include "respond/sim.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "respond/errors.hpp"

namespace respond {

void TrialSimConfig::validate() const {
    if (n_patients <= 0) throw InvalidConfig("sim: n_patients must be positive");
    for (auto [label, v] : {std::pair<const char*, double>{"hazard_response", hazard_response},
                            {"hazard_progression_pre", hazard_progression_pre},
                            {"hazard_progression_post", hazard_progression_post},
                            {"hazard_death", hazard_death}}) {
        if (v < 0.0 || !std::isfinite(v))
            throw InvalidConfig(std::string("sim: ") + label + " must be a finite rate >= 0");
    }
    if (prob_new_therapy_at_pd < 0.0 || prob_new_therapy_at_pd > 1.0)
        throw InvalidConfig("sim: prob_new_therapy_at_pd must be in [0,1]");
    if (cutoff_day <= 0) throw InvalidConfig("sim: cutoff_day must be positive");
    int prev = 0;
    for (int d : assessment_days) {
        if (d <= prev) throw InvalidConfig("sim: assessment_days must be strictly increasing");
        prev = d;
    }
}

std::vector<int> TrialSimConfig::default_schedule(int cutoff_day) {
    std::vector<int> days;
    for (int cycle : {3, 5, 7}) {
        int d = (cycle - 1) * 28;
        if (d <= cutoff_day) days.push_back(d);
    }
    for (int cycle = 10;; cycle += 3) {
        int d = (cycle - 1) * 28;
        if (d > cutoff_day) break;
        days.push_back(d);
    }
    return days;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

// Inverse-CDF exponential draw from explicit uniforms keeps output identical
// across standard libraries.
double uniform01(std::mt19937_64& rng) {
    return (rng() >> 11) * 0x1.0p-53;
}

double exp_draw(std::mt19937_64& rng, double rate) {
    if (rate <= 0.0) return std::numeric_limits<double>::infinity();
    return -std::log1p(-uniform01(rng)) / rate;
}

}  // namespace

std::vector<PatientRecord> simulate_trial(const TrialSimConfig& cfg) {
    cfg.validate();
    std::vector<int> schedule =
        cfg.assessment_days.empty() ? TrialSimConfig::default_schedule(cfg.cutoff_day)
                                    : cfg.assessment_days;

    std::vector<PatientRecord> cohort;
    cohort.reserve(cfg.n_patients);
    for (int i = 0; i < cfg.n_patients; ++i) {
        std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
        const double t_resp = exp_draw(rng, cfg.hazard_response);
        const double t_pd_pre = exp_draw(rng, cfg.hazard_progression_pre);
        const double t_death_pre = exp_draw(rng, cfg.hazard_death);
        const double t_pd_post = exp_draw(rng, cfg.hazard_progression_post);
        const double t_death_post = exp_draw(rng, cfg.hazard_death);
        const double u_new_therapy = uniform01(rng);

        // latent trajectory
        double response_at = std::numeric_limits<double>::infinity();
        double progressed_at = std::numeric_limits<double>::infinity();
        double died_at = std::numeric_limits<double>::infinity();
        double first_pre = std::min({t_resp, t_pd_pre, t_death_pre});
        if (first_pre == t_resp) {
            response_at = t_resp;
            if (t_pd_post <= t_death_post)
                progressed_at = t_resp + t_pd_post;
            else
                died_at = t_resp + t_death_post;
        } else if (first_pre == t_pd_pre) {
            progressed_at = t_pd_pre;
        } else {
            died_at = t_death_pre;
        }

        PatientRecord p;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "SIM-%05d", i + 1);
        p.id = buf;
        p.cutoff_day = cfg.cutoff_day;
        if (died_at <= cfg.cutoff_day)
            p.death_day = static_cast<int>(std::ceil(died_at));

        for (int day : schedule) {
            if (day > cfg.cutoff_day) break;
            if (day >= died_at) break;  // no assessments after death
            ResponseCategory cat;
            if (day >= progressed_at)
                cat = ResponseCategory::PD;
            else if (day >= response_at)
                cat = ResponseCategory::PR;
            else
                cat = ResponseCategory::SD;
            p.assessments.push_back({day, cat});
            if (cat == ResponseCategory::PD) {
                if (u_new_therapy < cfg.prob_new_therapy_at_pd) p.new_therapy_day = day;
                break;  // assessments stop once progression is documented
            }
        }
        // death recorded after the last assessment satisfies the record invariant
        if (p.death_day && !p.assessments.empty() &&
            *p.death_day < p.assessments.back().day)
            p.death_day = p.assessments.back().day;
        cohort.push_back(std::move(p));
    }
    return cohort;
}

double TrueSummaries::response_cif(double t_days) const {
    if (hazard_any_pre <= 0.0) return 0.0;
    return p_response * (1.0 - std::exp(-hazard_any_pre * t_days));
}

double TrueSummaries::pbir(double t_days) const {
    const double a = hazard_any_pre;
    const double b = hazard_any_post;
    const double lr = p_response * a;  // = hazard_response
    if (lr <= 0.0) return 0.0;
    if (std::fabs(a - b) < 1e-12) return lr * t_days * std::exp(-a * t_days);
    return lr * (std::exp(-b * t_days) - std::exp(-a * t_days)) / (a - b);
}

double TrueSummaries::edor_months(double tau_days) const {
    const double a = hazard_any_pre;
    const double b = hazard_any_post;
    const double lr = p_response * a;
    if (lr <= 0.0) return 0.0;
    double integral;
    if (std::fabs(a - b) < 1e-12) {
        // int_0^tau lr t e^{-a t} dt
        integral = lr * (1.0 - std::exp(-a * tau_days) * (1.0 + a * tau_days)) / (a * a);
    } else {
        integral = lr / (a - b) *
                   ((1.0 - std::exp(-b * tau_days)) / b - (1.0 - std::exp(-a * tau_days)) / a);
    }
    return stats::days_to_months(integral);
}

TrueSummaries true_summaries(const TrialSimConfig& cfg) {
    cfg.validate();
    TrueSummaries t;
    t.hazard_any_pre = cfg.hazard_response + cfg.hazard_progression_pre + cfg.hazard_death;
    t.hazard_any_post = cfg.hazard_progression_post + cfg.hazard_death;
    t.p_response = t.hazard_any_pre > 0.0 ? cfg.hazard_response / t.hazard_any_pre : 0.0;
    t.post_response_median_days = t.hazard_any_post > 0.0
                                      ? std::log(2.0) / t.hazard_any_post
                                      : std::numeric_limits<double>::infinity();
    return t;
}

}  // namespace respond
