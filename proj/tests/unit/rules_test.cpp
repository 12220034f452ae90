#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "utsarjan/rules/adherence.hpp"
#include "utsarjan/rules/blood_pressure.hpp"
#include "utsarjan/rules/criticality.hpp"
#include "utsarjan/rules/errors.hpp"
#include "utsarjan/rules/growth.hpp"
#include "utsarjan/rules/urine.hpp"

using namespace utsarjan;
using namespace utsarjan::rules;

namespace {

const std::string kData = UTSARJAN_DATA_DIR;

std::shared_ptr<const GrowthReferenceTable> growth_table() {
  static auto t = std::make_shared<const GrowthReferenceTable>(
      GrowthReferenceTable::load(kData + "/growth_reference_v1.csv"));
  return t;
}

const BpReferenceTable& bp_table() {
  static auto t = BpReferenceTable::load(kData + "/bp_reference_v1.csv", growth_table());
  return t;
}

std::vector<DatedGrade> dated(const std::vector<int>& grades, Date start = Date{2024, 1, 1}) {
  std::vector<DatedGrade> out;
  for (std::size_t i = 0; i < grades.size(); ++i) {
    out.push_back({start.plus_days(static_cast<int>(i)), kAllGrades[grades[i]]});
  }
  return out;
}

}  // namespace

TEST_CASE("urine grade nominal values and labels") {
  CHECK_FALSE(nominal_mg_dl(UrineProteinGrade::Negative));
  CHECK_FALSE(nominal_mg_dl(UrineProteinGrade::Trace));
  CHECK(nominal_mg_dl(UrineProteinGrade::OnePlus) == 30);
  CHECK(nominal_mg_dl(UrineProteinGrade::TwoPlus) == 100);
  CHECK(nominal_mg_dl(UrineProteinGrade::ThreePlus) == 300);
  CHECK(nominal_mg_dl(UrineProteinGrade::FourPlus) == 2000);
  for (auto g : kAllGrades) CHECK(parse_grade(to_string(g)) == g);
  CHECK_FALSE(parse_grade("5+"));
}

TEST_CASE("classify_urine_protein") {
  CHECK(classify_urine_protein(UrineProteinGrade::ThreePlus) == SeverityColor::Red);
  CHECK(classify_urine_protein(UrineProteinGrade::OnePlus) == SeverityColor::Yellow);
  CHECK(classify_urine_protein(UrineProteinGrade::Negative) == SeverityColor::Green);

  SUBCASE("monotone in grade") {
    for (auto a : kAllGrades) {
      for (auto b : kAllGrades) {
        if (a <= b) CHECK(classify_urine_protein(a) <= classify_urine_protein(b));
      }
    }
  }
}

TEST_CASE("relapse_scan examples") {
  Date d1{2024, 3, 1};
  SUBCASE("three heavy in a row") {
    auto scan = relapse_scan(dated({4, 4, 4}, d1));
    CHECK(scan.state.status == RelapseStatus::Relapse);
    CHECK(scan.state.onset_date == d1);
    CHECK(scan.state.suspect_count == 3);
  }
  SUBCASE("run broken by a 2+") {
    auto scan = relapse_scan(dated({4, 3, 4}, d1));
    CHECK(scan.state.status == RelapseStatus::Suspected);
    CHECK(scan.state.suspect_count == 1);
    CHECK_FALSE(scan.state.onset_date);
    CHECK(scan.flags == std::vector<RelapseFlag>{{true}, {false}, {true}});
  }
  SUBCASE("gaps between entries do not matter") {
    std::vector<DatedGrade> e{{Date{2024, 1, 1}, UrineProteinGrade::FourPlus},
                              {Date{2024, 4, 1}, UrineProteinGrade::ThreePlus},
                              {Date{2024, 9, 1}, UrineProteinGrade::ThreePlus}};
    auto scan = relapse_scan(e);
    CHECK(scan.state.status == RelapseStatus::Relapse);
    CHECK(scan.state.onset_date == Date{2024, 1, 1});
  }
  SUBCASE("empty input") {
    auto scan = relapse_scan({});
    CHECK(scan.state == RelapseState{});
    CHECK(scan.flags.empty());
  }
  SUBCASE("unsorted or duplicate dates rejected") {
    std::vector<DatedGrade> dup{{d1, UrineProteinGrade::Trace}, {d1, UrineProteinGrade::Trace}};
    CHECK_THROWS_AS(relapse_scan(dup), UnsortedInput);
    std::vector<DatedGrade> back{{d1.plus_days(1), UrineProteinGrade::Trace}, {d1, UrineProteinGrade::Trace}};
    CHECK_THROWS_AS(relapse_scan(back), UnsortedInput);
  }
}

TEST_CASE("relapse_scan agrees with run-length oracle on random sequences") {
  std::mt19937 rng(20240517);
  for (int iter = 0; iter < 500; ++iter) {
    std::uniform_int_distribution<int> len(0, 40);
    // Bias toward heavy grades so long runs actually occur.
    std::discrete_distribution<int> grade({1, 1, 1, 1, 3, 3});
    std::vector<int> g(len(rng));
    for (auto& x : g) x = grade(rng);
    auto entries = dated(g);
    auto scan = relapse_scan(entries);
    auto want = oracle::relapse(g);
    REQUIRE(static_cast<int>(scan.state.status) == want.status);
    REQUIRE(scan.state.suspect_count == want.suspect_count);
    if (want.onset_index) {
      REQUIRE(scan.state.onset_date == entries[*want.onset_index].date);
    } else {
      REQUIRE_FALSE(scan.state.onset_date);
    }
    for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(scan.flags[i].heavy == (g[i] >= 4));
  }
}

TEST_CASE("relapse_scan incremental consistency") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> grade(0, 5);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<int> g(1 + iter % 25);
    for (auto& x : g) x = grade(rng);
    auto entries = dated(g);
    RelapseScanner scanner;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      scanner.extend(entries[i]);
      auto whole = relapse_scan(std::span(entries).first(i + 1));
      REQUIRE(scanner.state() == whole.state);
    }
  }
}

TEST_CASE("a non-heavy entry inside a short heavy run prevents relapse") {
  for (int run = 1; run <= 2; ++run) {
    for (int breaker = 0; breaker < 4; ++breaker) {
      std::vector<int> g(run, 4);
      g.push_back(breaker);
      g.insert(g.end(), 2, 5);
      CHECK(relapse_scan(dated(g)).state.status != RelapseStatus::Relapse);
    }
  }
}

TEST_CASE("bp_color") {
  CHECK(bp_color(BpStage::Stage1) == SeverityColor::Yellow);
  CHECK(bp_color(BpStage::Stage2) == SeverityColor::Red);
  CHECK(bp_color(BpStage::Normal) == SeverityColor::Green);
  CHECK(bp_color(BpStage::Elevated) == SeverityColor::Green);
}

TEST_CASE("bp table loads with the static adolescent cutoffs") {
  const auto& t = bp_table();
  CHECK(t.version() == "bp_reference_v1");
  CHECK(t.adolescent().elevated.systolic == 120);
  CHECK(t.adolescent().stage1.systolic == 130);
  CHECK(t.adolescent().stage1.diastolic == 80);
  CHECK(t.adolescent().stage2.systolic == 140);
  CHECK(t.adolescent().stage2.diastolic == 90);
  for (Sex s : {Sex::F, Sex::M}) {
    for (int age = 1; age <= 12; ++age) {
      for (const auto& row : t.rows(s, age)) {
        CHECK(row.sbp_p90 < row.sbp_p95);
        CHECK(row.dbp_p90 < row.dbp_p95);
      }
    }
  }
}

TEST_CASE("classify_bp examples") {
  const auto& t = bp_table();
  SUBCASE("adolescent 142/92 is Stage2") {
    CHECK(classify_bp({142, 92, 170, Sex::M, 160.0}, t) == BpStage::Stage2);
    CHECK(classify_bp({142, 92, 170, Sex::F, 150.0}, t) == BpStage::Stage2);
  }
  SUBCASE("adolescent channel maxima") {
    CHECK(classify_bp({118, 70, 180, Sex::F, 160.0}, t) == BpStage::Normal);
    CHECK(classify_bp({124, 70, 180, Sex::F, 160.0}, t) == BpStage::Elevated);
    CHECK(classify_bp({118, 82, 180, Sex::F, 160.0}, t) == BpStage::Stage1);
    CHECK(classify_bp({131, 60, 180, Sex::F, 160.0}, t) == BpStage::Stage1);
    CHECK(classify_bp({118, 90, 180, Sex::F, 160.0}, t) == BpStage::Stage2);
  }
  SUBCASE("below every cutoff in the row is Normal") {
    const auto& row = t.lookup(Sex::F, 60, 109.4);
    CHECK(classify_bp({row.sbp_p90 - 1, row.dbp_p90 - 1, 60, Sex::F, 109.4}, t) == BpStage::Normal);
  }
  SUBCASE("exact p90 and p95 boundaries") {
    const auto& row = t.lookup(Sex::M, 96, 127.3);
    CHECK(classify_bp({row.sbp_p90, row.dbp_p90 - 5, 96, Sex::M, 127.3}, t) == BpStage::Elevated);
    CHECK(classify_bp({row.sbp_p95, row.dbp_p90 - 5, 96, Sex::M, 127.3}, t) == BpStage::Stage1);
    CHECK(classify_bp({row.sbp_p90 - 10, row.dbp_p90, 96, Sex::M, 127.3}, t) == BpStage::Elevated);
    CHECK(classify_bp({row.sbp_p90 - 10, row.dbp_p95, 96, Sex::M, 127.3}, t) == BpStage::Stage1);
    CHECK(classify_bp({row.sbp_p95 + 12, row.dbp_p90 - 5, 96, Sex::M, 127.3}, t) == BpStage::Stage2);
    CHECK(classify_bp({row.sbp_p95 + 11, row.dbp_p90 - 5, 96, Sex::M, 127.3}, t) == BpStage::Stage1);
  }
  SUBCASE("taller children use a higher height band") {
    const auto& short_row = t.lookup(Sex::M, 96, 115.0);
    const auto& tall_row = t.lookup(Sex::M, 96, 140.0);
    CHECK(short_row.height_band == 5);
    CHECK(tall_row.height_band == 95);
  }
  SUBCASE("reference miss and invalid readings") {
    CHECK_THROWS_AS(classify_bp({100, 60, 6, Sex::M, 67.0}, t), ReferenceMiss);
    CHECK_THROWS_AS(classify_bp({60, 100, 60, Sex::M, 110.0}, t), DomainError);
    CHECK_THROWS_AS(classify_bp({100, 60, 217, Sex::M, 170.0}, t), DomainError);
    BpReferenceTable no_norms = BpReferenceTable::from_csv(
        csv::read_file(kData + "/bp_reference_v1.csv"), nullptr);
    CHECK_THROWS_AS(classify_bp({100, 60, 60, Sex::M, 110.0}, no_norms), ReferenceMiss);
  }
}

TEST_CASE("classify_bp matches the two-channel max oracle") {
  auto bp = oracle::read_bp(kData + "/bp_reference_v1.csv");
  auto g = oracle::read_growth(kData + "/growth_reference_v1.csv");
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> age(12, 216), sys(80, 160), dia(40, 100);
  std::uniform_real_distribution<double> hz(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    int a = age(rng);
    Sex sex = i % 2 ? Sex::M : Sex::F;
    auto h = oracle::growth_row(g, sex == Sex::F ? 'F' : 'M', "height", a);
    REQUIRE(h);
    double height = h->first + hz(rng) * h->second;
    int s = sys(rng), d = std::min(dia(rng), s - 1);
    int want = oracle::bp_stage(bp, g, sex == Sex::F ? 'F' : 'M', a, height, s, d);
    REQUIRE(want >= 0);
    REQUIRE(static_cast<int>(classify_bp({s, d, a, sex, height}, bp_table())) == want);
  }
}

TEST_CASE("bp table rejects malformed data") {
  auto good = csv::read_file(kData + "/bp_reference_v1.csv");
  SUBCASE("wrong header") {
    auto doc = good;
    doc.header[0] = "gender";
    CHECK_THROWS_AS(BpReferenceTable::from_csv(doc, growth_table()), ReferenceDataError);
  }
  SUBCASE("p90 not below p95") {
    auto doc = good;
    doc.rows[0][3] = doc.rows[0][4];
    CHECK_THROWS_AS(BpReferenceTable::from_csv(doc, growth_table()), ReferenceDataError);
  }
  SUBCASE("missing age coverage") {
    auto doc = good;
    std::erase_if(doc.rows, [](const csv::Row& r) { return r[0] == "F" && r[1] == "7"; });
    CHECK_THROWS_AS(BpReferenceTable::from_csv(doc, growth_table()), ReferenceDataError);
  }
  SUBCASE("missing static row") {
    auto doc = good;
    std::erase_if(doc.rows, [](const csv::Row& r) { return r[2] == "stage2"; });
    CHECK_THROWS_AS(BpReferenceTable::from_csv(doc, growth_table()), ReferenceDataError);
  }
}

TEST_CASE("assess_growth examples") {
  const auto& t = *growth_table();
  const auto& row = t.lookup(Sex::F, 60, GrowthMetric::Height);
  SUBCASE("median gives z = 0") {
    auto a = assess_growth(row.median, Sex::F, 60, GrowthMetric::Height, t);
    CHECK(a.z == doctest::Approx(0.0));
    CHECK(a.band == SeverityColor::Green);
  }
  SUBCASE("median + 2 sd is Red") {
    auto a = assess_growth(row.median + 2 * row.sd, Sex::F, 60, GrowthMetric::Height, t);
    CHECK(a.z == doctest::Approx(2.0));
    CHECK(a.band == SeverityColor::Red);
  }
  SUBCASE("non-positive value") {
    CHECK_THROWS_AS(assess_growth(0.0, Sex::F, 60, GrowthMetric::Height, t), DomainError);
  }
  SUBCASE("miss beyond the table") {
    CHECK_THROWS_AS(assess_growth(170.0, Sex::F, 223, GrowthMetric::Height, t), ReferenceMiss);
    CHECK_NOTHROW(assess_growth(170.0, Sex::F, 222, GrowthMetric::Height, t));
  }
}

TEST_CASE("growth lookup picks the nearest row and ties toward the younger") {
  csv::Document doc{GrowthReferenceTable::kHeader,
                    {{"M", "12", "weight", "10", "1"}, {"M", "24", "weight", "12", "1.5"}}};
  auto t = GrowthReferenceTable::from_csv(doc);
  CHECK(t.lookup(Sex::M, 17, GrowthMetric::Weight).age_months == 12);
  CHECK(t.lookup(Sex::M, 18, GrowthMetric::Weight).age_months == 12);
  CHECK(t.lookup(Sex::M, 19, GrowthMetric::Weight).age_months == 24);
  CHECK(t.lookup(Sex::M, 6, GrowthMetric::Weight).age_months == 12);
  CHECK_THROWS_AS(t.lookup(Sex::M, 5, GrowthMetric::Weight), ReferenceMiss);
  CHECK_THROWS_AS(t.lookup(Sex::F, 12, GrowthMetric::Weight), ReferenceMiss);

  csv::Document bad_sd{GrowthReferenceTable::kHeader, {{"M", "12", "weight", "10", "0"}}};
  CHECK_THROWS_AS(GrowthReferenceTable::from_csv(bad_sd), ReferenceDataError);
  csv::Document unsorted{GrowthReferenceTable::kHeader,
                         {{"M", "24", "weight", "12", "1"}, {"M", "12", "weight", "10", "1"}}};
  CHECK_THROWS_AS(GrowthReferenceTable::from_csv(unsorted), ReferenceDataError);
}

TEST_CASE("growth bands at exact boundaries") {
  for (double z : {-2.5, -2.0, -1.5, -1.0, 0.0, 1.0, 1.5, 2.0, 2.5}) {
    CHECK(static_cast<int>(growth_band(z)) == oracle::band_of(z));
  }
  CHECK(growth_band(1.0) == SeverityColor::Yellow);
  CHECK(growth_band(-1.0) == SeverityColor::Yellow);
  CHECK(growth_band(2.0) == SeverityColor::Red);
  CHECK(growth_band(-2.0) == SeverityColor::Red);
  CHECK(growth_band(std::nextafter(1.0, 0.0)) == SeverityColor::Green);
  CHECK(growth_band(std::nextafter(2.0, 0.0)) == SeverityColor::Yellow);
}

TEST_CASE("assess_growth band agrees with interval check on random pairs") {
  const auto& t = *growth_table();
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> age(0, 216);
  std::uniform_real_distribution<double> zdist(-3.5, 3.5);
  const GrowthMetric metrics[] = {GrowthMetric::Height, GrowthMetric::Weight, GrowthMetric::Bmi};
  for (int i = 0; i < 200; ++i) {
    Sex sex = i % 2 ? Sex::F : Sex::M;
    auto metric = metrics[i % 3];
    int a = age(rng);
    const auto& row = t.lookup(sex, a, metric);
    double value = row.median + zdist(rng) * row.sd;
    if (value <= 0) continue;
    auto got = assess_growth(value, sex, a, metric, t);
    REQUIRE(static_cast<int>(got.band) == oracle::band_of((value - row.median) / row.sd));
  }
}

TEST_CASE("compute_bmi") {
  CHECK(compute_bmi(30, 120) == doctest::Approx(30.0 / 1.44));
  CHECK(format_display(compute_bmi(30, 120)) == "20.8");
  CHECK(compute_bmi(30, 240) == doctest::Approx(compute_bmi(30, 120) / 4));
  CHECK_THROWS_AS(compute_bmi(0, 120), DomainError);
  CHECK_THROWS_AS(compute_bmi(30, -1), DomainError);
  CHECK(format_display(20.85) == "20.9");
  CHECK(format_display(20.849) == "20.8");
  CHECK(format_display(15.0) == "15.0");
}

TEST_CASE("patient_criticality") {
  RelapseState relapse{RelapseStatus::Relapse, Date{2024, 1, 1}, 3};
  RelapseState calm{};
  LatestAssessment green{SeverityColor::Green, BpStage::Normal, {SeverityColor::Green}};
  CHECK(patient_criticality(green, relapse));
  CHECK_FALSE(patient_criticality(green, calm));
  CHECK_FALSE(patient_criticality({}, calm));
  CHECK(patient_criticality({std::nullopt, BpStage::Stage2, {}}, calm));
  CHECK_FALSE(patient_criticality({std::nullopt, BpStage::Stage1, {SeverityColor::Yellow}}, calm));

  SUBCASE("disjunction oracle and monotonicity over every combination") {
    const int colors[] = {-1, 0, 1, 2};
    const int stages[] = {-1, 0, 1, 2, 3};
    auto make = [](int u, int b, int g1, int g2) {
      LatestAssessment a;
      if (u >= 0) a.urine_color = static_cast<SeverityColor>(u);
      if (b >= 0) a.bp_stage = static_cast<BpStage>(b);
      for (int g : {g1, g2}) {
        if (g >= 0) a.growth_bands.push_back(static_cast<SeverityColor>(g));
      }
      return a;
    };
    for (int rel = 0; rel < 3; ++rel) {
      RelapseState r{static_cast<RelapseStatus>(rel), std::nullopt, rel == 2 ? 3 : rel};
      for (int u : colors)
        for (int b : stages)
          for (int g1 : colors)
            for (int g2 : colors) {
              std::vector<int> gs;
              for (int g : {g1, g2}) {
                if (g >= 0) gs.push_back(g);
              }
              bool got = patient_criticality(make(u, b, g1, g2), r);
              REQUIRE(got == oracle::critical(u, b, gs, rel == 2));
              if (got) {
                // escalating any present channel keeps it critical
                if (u >= 0) REQUIRE(patient_criticality(make(2, b, g1, g2), r));
                if (b >= 0) REQUIRE(patient_criticality(make(u, 3, g1, g2), r));
                if (g1 >= 0) REQUIRE(patient_criticality(make(u, b, 2, g2), r));
              }
            }
    }
  }
}

TEST_CASE("adherence_rate") {
  Date start{2024, 5, 1};
  DoseSchedule daily{start, start.plus_days(6), 1};
  std::vector<DoseFact> all_taken, none;
  for (int i = 0; i < 7; ++i) all_taken.push_back({start.plus_days(i), true});
  auto full = adherence_rate(daily, all_taken, start, start.plus_days(6));
  CHECK(full.expected_doses == 7);
  CHECK(full.taken_doses == 7);
  CHECK(full.rate == 1.0);
  auto zero = adherence_rate(daily, none, start, start.plus_days(6));
  CHECK(zero.expected_doses == 7);
  CHECK(zero.rate == 0.0);
  auto outside = adherence_rate(daily, none, start.plus_days(30), start.plus_days(31));
  CHECK(outside.expected_doses == 0);
  CHECK(outside.rate == 1.0);
  CHECK_THROWS_AS(adherence_rate(daily, none, start.plus_days(1), start), InvalidWindow);
}

TEST_CASE("adherence_rate matches per-day counting oracle") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> day(0, 60), per_day(1, 3), nfacts(0, 40), coin(0, 1);
  Date epoch{2024, 1, 1};
  for (int i = 0; i < 300; ++i) {
    int s0 = day(rng), s1 = s0 + day(rng) / 2;
    bool open = coin(rng);
    int freq = per_day(rng);
    std::vector<oracle::DayFact> facts;
    std::vector<DoseFact> dose_facts;
    for (int k = nfacts(rng); k > 0; --k) {
      oracle::DayFact f{day(rng), coin(rng) == 1};
      facts.push_back(f);
      dose_facts.push_back({epoch.plus_days(f.day), f.taken});
    }
    int w0 = day(rng), w1 = w0 + day(rng) / 3;
    DoseSchedule sched{epoch.plus_days(s0), open ? std::nullopt : std::optional{epoch.plus_days(s1)}, freq};
    auto got = adherence_rate(sched, dose_facts, epoch.plus_days(w0), epoch.plus_days(w1));
    auto [expected, taken] = oracle::adherence(s0, open ? 100000 : s1, freq, facts, w0, w1);
    REQUIRE(got.expected_doses == expected);
    REQUIRE(got.taken_doses == taken);
    REQUIRE(got.taken_doses <= got.expected_doses);
    REQUIRE(got.rate == doctest::Approx(expected ? double(taken) / expected : 1.0));
  }
}

TEST_CASE("rules are pure: repeated calls agree") {
  auto entries = dated({4, 5, 4, 1, 4});
  auto a = relapse_scan(entries);
  auto b = relapse_scan(entries);
  CHECK(a.state == b.state);
  CHECK(a.flags == b.flags);
  BpReading r{125, 85, 100, Sex::F, 130.0};
  CHECK(classify_bp(r, bp_table()) == classify_bp(r, bp_table()));
}
