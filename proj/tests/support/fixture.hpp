#pragma once

// Three-day diary fixture shared by the store tests, the HTTP tests and the
// acceptance suite. The exported CSV of this fixture is the golden file
// tests/golden/three_day_export.csv.

#include <optional>
#include <string>
#include <vector>

namespace fixture {

struct Dose {
  std::string medicine;  // matches Medicine::name
  bool taken;
};

struct Measurement {
  std::optional<int> systolic, diastolic;
  std::optional<double> height_cm, weight_kg;
  std::string comments;
};

struct Day {
  std::string date;
  std::string grade;
  std::string symptoms;
  std::vector<Measurement> measurements;
  std::vector<Dose> doses;
  std::vector<std::string> advice;  // doctor-authored
  std::vector<std::string> patient_notes;
  std::vector<std::vector<std::string>> tests;
  std::string test_comments;
};

struct Medicine {
  std::string name;
  std::string category;
  double dose;
  std::string unit;
  int frequency;
  std::string start;
  std::optional<std::string> end;
};

inline const std::string kPatientName = "Aarav Kumar";
inline const std::string kDateOfBirth = "2017-05-10";
inline const std::string kSex = "M";

inline const std::vector<Medicine> kMedicines{
    {"Prednisolone", "Steroid", 20, "mg", 1, "2024-03-01", "2024-03-28"},
    {"Enalapril", "Other", 2.5, "mg", 2, "2024-03-02", std::nullopt},
};

inline const std::vector<Day> kDays{
    {"2024-03-01",
     "2+",
     "mild puffiness around eyes",
     {{104, 66, 120.5, 23.4, "Initial visit, weight taken after breakfast"}},
     {{"Prednisolone", true}},
     {"Continue daily dipstick, first morning sample"},
     {},
     {},
     ""},
    {"2024-03-02",
     "3+",
     "swelling of feet, \"frothy\" urine",
     {},
     {{"Prednisolone", true}, {"Enalapril", false}},
     {},
     {"Forgot evening dose"},
     {{"Serum albumin", "Lipid profile"}},
     "fasting sample"},
    {"2024-03-03",
     "4+",
     "abdominal pain,\nreduced urine output",
     {{122, 82, std::nullopt, std::nullopt, ""}, {std::nullopt, std::nullopt, 121.0, 23.1, "recheck"}},
     {{"Prednisolone", true}, {"Enalapril", true}},
     {},
     {},
     {},
     ""},
};

}  // namespace fixture
