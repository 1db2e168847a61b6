#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rit/dataset.hpp"
#include "rit/error.hpp"
#include "rit/minhash.hpp"
#include "rit/mining.hpp"
#include "rit/random.hpp"

using namespace rit;

namespace {

// class 1: {0,1} in every row; class 0: never both
SparseDataset separable() {
  return SparseDataset(4, {{0, 1}, {0, 1, 2}, {0, 1, 3}, {0, 2}, {1, 3}, {2, 3}}, {1, 1, 1, 0, 0, 0});
}

CandidateSet counted(std::initializer_list<std::pair<Pattern, std::size_t>> items) {
  CandidateSet out;
  for (const auto& [p, n] : items) out[p].tree_count = n;
  return out;
}

}  // namespace

TEST_CASE("verification keeps exactly the patterns meeting both thresholds") {
  const auto ds = separable();
  const auto cands = counted({{Pattern{0, 1}, 3}, {Pattern{0}, 5}, {Pattern{2, 3}, 1}, {Pattern{3}, 2}});
  const auto kept = verify_candidates(ds, cands, 0.0, 0.9);
  REQUIRE(kept.size() == 1);
  const auto& [pattern, stats] = *kept.begin();
  CHECK(pattern == Pattern{0, 1});
  CHECK(stats.tree_count == 3);
  CHECK(*stats.prev1 == 1.0);
  CHECK(*stats.prev0 == 0.0);

  const auto loose = verify_candidates(ds, cands, 0.34, 0.5);
  CHECK(loose.size() == 2);
  CHECK(loose.count(Pattern{0}) == 1);
  CHECK(loose.at(Pattern{0}).prev0 == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(verify_candidates(ds, cands, 1.0, 0.0), ConfigError);
}

TEST_CASE("verification matches a direct scan") {
  const auto ds = generate_independent(12, 60, 60, 0.4, 31);
  CandidateSet cands;
  Stream rng(31, 1);
  for (int i = 0; i < 300; ++i) {
    IndexSet s;
    for (Index k = 0; k < 12; ++k)
      if (bernoulli(rng, 0.2)) s.push_back(k);
    if (!s.empty()) ++cands[Pattern(s)].tree_count;
  }
  const auto kept = verify_candidates(ds, cands, 0.1, 0.15);
  for (const auto& [pattern, stats] : cands) {
    const double p1 = exact_prevalence(ds, pattern, ClassSelector::kClass1);
    const double p0 = exact_prevalence(ds, pattern, ClassSelector::kClass0);
    CHECK((kept.count(pattern) == 1) == (p1 >= 0.15 && p0 <= 0.1));
  }
}

TEST_CASE("ranking order") {
  const auto cands = counted({{Pattern{5}, 2}, {Pattern{1, 2}, 4}, {Pattern{0, 9}, 2}, {Pattern{0, 3, 4}, 2},
                              {Pattern{7}, 1}, {Pattern{2}, 2}});
  const auto ranked = rank_candidates(cands, 2);
  REQUIRE(ranked.size() == 5);
  CHECK(ranked[0].first == Pattern{1, 2});
  CHECK(ranked[1].first == Pattern{2});
  CHECK(ranked[2].first == Pattern{5});
  CHECK(ranked[3].first == Pattern{0, 9});
  CHECK(ranked[4].first == Pattern{0, 3, 4});
  CHECK(rank_candidates(cands, 1).size() == 6);
  CHECK(rank_candidates(cands, 5).empty());
}

TEST_CASE("posterior") {
  const auto ds = separable();
  CHECK(posterior(ds, Pattern{0, 1}) == 1.0);
  CHECK(posterior(ds, Pattern{}) == doctest::Approx(0.5));
  CHECK(posterior(ds, Pattern{2, 3}) == 0.0);
  CHECK(posterior(ds, Pattern{0}) == doctest::Approx(0.75));
  CHECK_THROWS_AS(posterior(SparseDataset(4, {{0}, {1}}, {1, 0}), Pattern{2}), DataError);
}

TEST_CASE("posterior rises with class-1 prevalence and falls with class-0 prevalence") {
  const auto ds = generate_independent(10, 80, 120, 0.5, 44);
  Stream rng(44, 2);
  int compared = 0;
  for (int trial = 0; trial < 4000 && compared < 200; ++trial) {
    IndexSet a, b;
    for (Index k = 0; k < 10; ++k) {
      if (bernoulli(rng, 0.25)) a.push_back(k);
      if (bernoulli(rng, 0.25)) b.push_back(k);
    }
    const Pattern sa(a), sb(b);
    const double a1 = exact_prevalence(ds, sa, ClassSelector::kClass1);
    const double a0 = exact_prevalence(ds, sa, ClassSelector::kClass0);
    const double b1 = exact_prevalence(ds, sb, ClassSelector::kClass1);
    const double b0 = exact_prevalence(ds, sb, ClassSelector::kClass0);
    if (a1 == 0.0 || !(b1 >= a1 && b0 <= a0)) continue;
    ++compared;
    CHECK(posterior(ds, sb) >= posterior(ds, sa));
  }
  CHECK(compared >= 50);
}

TEST_CASE("a separating pattern classifies perfectly") {
  const auto ds = separable();
  const std::vector<Pattern> pats{Pattern{0, 1}};
  const auto model = fit_classifier(ds, pats);
  CHECK(model.logodds_present[0] == doctest::Approx(std::log(4.0)));
  CHECK(model.logodds_absent[0] == doctest::Approx(-std::log(4.0)));
  for (std::size_t i = 0; i < ds.size(); ++i)
    CHECK(predict(model, ds.row(i)).label == (Pattern{0, 1}.is_subset_of(ds.row(i)) ? 1 : 0));
  const auto ev = evaluate(model, ds);
  CHECK(ev.error == 0.0);
  CHECK(ev.n == 6);
}

TEST_CASE("smoothing keeps unseen patterns finite") {
  const auto ds = separable();
  const std::vector<Pattern> pats{Pattern{0, 1}, Pattern{0, 1, 2, 3}};
  const auto model = fit_classifier(ds, pats);
  CHECK(std::isfinite(model.logodds_present[1]));
  CHECK(model.logodds_present[1] == 0.0);
  CHECK(std::isfinite(model.logodds_absent[1]));
  CHECK(std::isfinite(predict(model, IndexSet{0, 1, 2, 3}).score));
  CHECK_THROWS_AS(fit_classifier(ds, std::vector<Pattern>{}), ConfigError);
}

TEST_CASE("exact score ties go to class 0") {
  PatternModel model;
  model.patterns = {Pattern{0}, Pattern{1}};
  model.logodds_present = {1.0, 1.0};
  model.logodds_absent = {-1.0, -1.0};
  model.decision_offset = 0.0;
  const auto pred = predict(model, IndexSet{0});
  CHECK(pred.score == 0.0);
  CHECK(pred.label == 0);
  CHECK(predict(model, IndexSet{0, 1}).label == 1);
}

TEST_CASE("offset balances class-wise training errors") {
  const auto ds = generate_planted(15, 300, 300, 0.5, 13);
  const std::vector<Pattern> pats{Pattern{0, 1}, Pattern{2}, Pattern{3, 4}};
  const auto model = fit_classifier(ds, pats);
  const auto ev = evaluate(model, ds);

  // no threshold does better on the balance key
  std::vector<double> scores;
  for (std::size_t i = 0; i < ds.size(); ++i) scores.push_back(model.score(ds.row(i)));
  std::vector<double> cuts{-1e9};
  for (double s : scores) cuts.push_back(s);
  double best = 1.0;
  for (double t : cuts) {
    double e1 = 0, e0 = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const bool says1 = scores[i] > t;
      if (ds.label(i) == 1 && !says1) e1 += 1;
      if (ds.label(i) == 0 && says1) e0 += 1;
    }
    best = std::min(best, std::abs(e1 / 300.0 - e0 / 300.0));
  }
  CHECK(std::abs(ev.error_class0 - ev.error_class1) == doctest::Approx(best));
  const auto again = fit_classifier(ds, pats);
  CHECK(again.decision_offset == model.decision_offset);
  CHECK(again.logodds_present == model.logodds_present);
}

TEST_CASE("json-lines output and read-back") {
  const auto ds = separable();
  const auto kept = verify_candidates(ds, counted({{Pattern{0, 1}, 3}, {Pattern{0}, 5}}), 0.5, 0.9);
  const auto ranked = rank_candidates(kept, 1);
  std::stringstream out;
  write_jsonl(out, ds, ranked);
  const auto text = out.str();
  CHECK(text.starts_with("{\"pattern\":[0],\"tree_count\":5,\"prev1\":1.0,\"prev0\":0.3333333333333333,\"posterior\":0.75}\n"));
  const auto back = read_patterns_jsonl(out);
  CHECK(back == std::vector<Pattern>{Pattern{0}, Pattern{0, 1}});

  std::istringstream bad("{\"pattern\":[2,1]}\n");
  CHECK_THROWS_AS(read_patterns_jsonl(bad), DataError);
}
