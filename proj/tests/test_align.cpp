#include <doctest.h>

#include <random>

#include "refparse/align.hpp"
#include "refparse/error.hpp"
#include "refparse/gencorpus.hpp"
#include "support.hpp"

using namespace refparse;
using namespace refparse::align;

namespace {

void check_well_formed(const AlignmentResult& r, std::size_t n, std::size_t m) {
  if (n == 0) m = 0;  // a matrix without rows carries no column count
  std::vector<int> s_used(n, 0), t_used(m, 0);
  for (std::size_t k = 0; k < r.pairs.size(); ++k) {
    if (k > 0) {
      REQUIRE(r.pairs[k].string_index > r.pairs[k - 1].string_index);
      REQUIRE(r.pairs[k].truth_index > r.pairs[k - 1].truth_index);
    }
    ++s_used[r.pairs[k].string_index];
    ++t_used[r.pairs[k].truth_index];
  }
  for (std::size_t i : r.unmatched_strings) ++s_used[i];
  for (std::size_t j : r.unmatched_truths) ++t_used[j];
  for (int c : s_used) REQUIRE(c == 1);
  for (int c : t_used) REQUIRE(c == 1);
}

std::vector<TruthValues> truths_of(const std::vector<gen::GeneratedReference>& c) {
  std::vector<TruthValues> out;
  for (const auto& g : c) out.push_back(truth_values_from_json(gen::fields_json(g.clean)));
  return out;
}

}  // namespace

TEST_CASE("token multisets and Jaccard") {
  CHECK(token_multiset("Nature, 5(2): 10-12") == std::vector<std::string>{"10", "12", "2", "5", "nature"});
  const std::vector<std::string> a = {"a", "a", "b"}, b = {"a", "c"};
  CHECK(jaccard(a, b) == doctest::Approx(1.0 / 4.0));
  CHECK(jaccard(std::vector<std::string>{}, std::vector<std::string>{}) == 0.0);
}

TEST_CASE("similarity") {
  CHECK(similarity("Smith 2001 Nature", TruthValues{"Nature", "Smith", "2001"}) == 1.0);
  CHECK(similarity("Smith 2001", TruthValues{"Jones", "1999"}) == 0.0);
  CHECK(similarity("", TruthValues{}) == 0.0);
  // 45 tokens in the string, 39 in the truth, all of them shared.
  const double s = similarity(fixtures::kFig1, fixtures::fig2_values());
  CHECK(s == doctest::Approx(39.0 / 45.0).epsilon(1e-12));
  CHECK(s > 0.5);
}

TEST_CASE("client-schema truth values") {
  const auto corpus = gen::generate_corpus(1, gen::default_styles(), gen::NoiseConfig{0.0}, 2);
  const TruthValues v = truth_values(corpus[0].truth);
  CHECK(v.size() == corpus[0].truth.size());
  CHECK(similarity(corpus[0].clean.tokens.original(), v) > 0.0);
}

TEST_CASE("truth values from JSON") {
  const TruthValues v = truth_values_from_json(R"({"author":"Li, C","authors":["Li, Chen","Wu, D"],"year":"2001","n":3})");
  CHECK(v == TruthValues{"Li, C", "Li, Chen", "Wu, D", "2001"});
  CHECK_THROWS_AS(truth_values_from_json("{"), Error);
}

TEST_CASE("identity and offset scenarios") {
  const auto corpus = gen::generate_corpus(5, gen::default_styles(), gen::NoiseConfig{0.0}, 2);
  const auto truths = truths_of(corpus);
  std::vector<std::string> strings;
  for (const auto& g : corpus) strings.push_back(g.clean.tokens.original());

  const auto same = align_lists(std::span(strings).first(3), std::span(truths).first(3));
  CHECK(same.pairs.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(same.pairs[k].string_index == k);
    CHECK(same.pairs[k].truth_index == k);
  }

  // The first two strings are missing.
  const auto off = align_lists(std::span(strings).subspan(2, 3), truths);
  REQUIRE(off.pairs.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(off.pairs[k].string_index == k);
    CHECK(off.pairs[k].truth_index == k + 2);
  }
  CHECK(off.unmatched_truths == std::vector<std::size_t>{0, 1});
  CHECK(off.unmatched_strings.empty());
}

TEST_CASE("empty inputs") {
  const auto r = align_lists({}, std::vector<TruthValues>{{"x"}});
  CHECK(r.pairs.empty());
  CHECK(r.unmatched_truths == std::vector<std::size_t>{0});
  CHECK(align_matrix({}).pairs.empty());
}

TEST_CASE("threshold keeps weak pairs out") {
  const std::vector<std::vector<double>> sim = {{0.29, 0.0}, {0.0, 0.9}};
  const auto r = align_matrix(sim, 0.3);
  REQUIRE(r.pairs.size() == 1);
  CHECK(r.pairs[0] == AlignedPair{1, 1, 0.9});
  CHECK(r.unmatched_strings == std::vector<std::size_t>{0});
}

TEST_CASE("ties prefer earlier pairs") {
  const std::vector<std::vector<double>> sim = {{0.5, 0.5}};
  const auto r = align_matrix(sim, 0.3);
  REQUIRE(r.pairs.size() == 1);
  CHECK(r.pairs[0].truth_index == 0);
}

TEST_CASE("DP equals the brute-force optimum") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::size_t> dim(0, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = dim(rng), m = dim(rng);
    std::vector<std::vector<double>> sim(n, std::vector<double>(m));
    for (auto& row : sim)
      for (auto& x : row) x = trial % 3 == 0 ? std::round(u(rng) * 4) / 4 : u(rng);
    for (double th : {0.0, 0.3, 0.7}) {
      const auto r = align_matrix(sim, th);
      check_well_formed(r, n, m);
      for (const auto& p : r.pairs) {
        REQUIRE(p.similarity == sim[p.string_index][p.truth_index]);
        REQUIRE(p.similarity >= th);
      }
      REQUIRE(r.total_similarity() == doctest::Approx(fixtures::brute_alignment(sim, th)).epsilon(1e-12));
      if (n == m) {
        double identity = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          if (sim[i][i] > 0.0 && sim[i][i] >= th) identity += sim[i][i];
        REQUIRE(r.total_similarity() >= identity - 1e-12);
      }
    }
  }
}

TEST_CASE("appending junk does not move existing pairs") {
  const auto corpus = gen::generate_corpus(30, gen::builtin_styles(), gen::NoiseConfig{0.03}, 4);
  const auto truths = truths_of(corpus);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> strings;
    for (std::size_t i = 0; i < corpus.size(); ++i)
      if (rng() % 4 != 0) strings.push_back(corpus[i].noisy.tokens.original());
    const auto before = align_lists(strings, truths);
    check_well_formed(before, strings.size(), truths.size());
    strings.push_back("zzqx qqzz 0000000 \xE2\x80\xA2");
    const auto after = align_lists(strings, truths);
    CHECK(after.pairs == before.pairs);
    CHECK(after.unmatched_strings.back() == strings.size() - 1);
  }
}
