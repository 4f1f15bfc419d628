#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "respond/estimand.hpp"
#include "respond/estimators.hpp"
#include "respond/sim.hpp"

namespace respond::io {

struct DatasetMeta {
    std::string study_id;
    std::string cutoff_label;
    std::string source_notes;
};

struct Dataset {
    std::vector<PatientRecord> patients;  // input order
    DatasetMeta meta;
};

// Optional remapping of logical column names (patient_id, day, category,
// baseline_measurable, death_day, new_therapy_day, treatment_stop_day,
// cutoff_day, date, start_date) to the names used in the file.
using ColumnMap = std::map<std::string, std::string>;

// Reads the canonical comma-delimited assessment file: one row per
// assessment, patient-level fields repeated on every row of a patient (or
// left empty after the first). A patient without post-baseline assessments
// uses one row with empty day and category. Leading "# key: value" lines
// carry dataset metadata. When a `day` column is absent, `date` and
// `start_date` (ISO yyyy-mm-dd) are converted on ingest.
//
// Throws ParseError for malformed rows and ValidationError for invariant
// breaches; both list every offending row with its line number.
Dataset parse_assessments_csv(const std::string& content, const ColumnMap& columns = {});
Dataset read_assessments(const std::string& path, const ColumnMap& columns = {});

// Canonical CSV emission; read(write(read(x))) is lossless.
std::string write_dataset_csv(const Dataset& dataset);

std::string write_reports_json(std::span<const EstimandReport> reports);
std::string write_reports_markdown(std::span<const EstimandReport> reports);
std::vector<EstimandReport> read_reports_json(const std::string& json_text);

// Declarative config: a JSON object {"estimand": {...}} or {"sim": {...}}
// (bare objects are accepted too). See README for the schema.
EstimandSpec estimand_spec_from_json(const std::string& text);
TrialSimConfig sim_config_from_json(const std::string& text);
ColumnMap column_map_from_json(const std::string& text);
std::string estimand_spec_to_json(const EstimandSpec& spec);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// days since epoch for an ISO yyyy-mm-dd date (civil-days algorithm)
long days_from_civil(int year, int month, int day);

}  // namespace respond::io
