// OCR-style corruption with label re-projection.

#include <algorithm>
#include <cmath>
#include <map>

#include "refparse/error.hpp"
#include "refparse/gencorpus.hpp"
#include "refparse/text.hpp"

namespace refparse::gen {

namespace {

// Single code point confusions; "rn" <-> "m" is handled separately.
const std::map<char32_t, char32_t>& confusions() {
  static const std::map<char32_t, char32_t> table = {
      {U'l', U'1'}, {U'1', U'l'}, {U'O', U'0'}, {U'0', U'O'}, {U'S', U'5'}, {U'5', U'S'}, {U'I', U'l'},
      {U'e', U'c'}, {U'c', U'e'}, {U'B', U'8'}, {U'8', U'B'}, {U'i', U'l'}, {U'u', U'v'}, {U'h', U'b'}};
  return table;
}

struct Unit {
  char32_t cp;
  int tag;  // label index, -1 for whitespace
};

std::size_t corrupt_units(std::vector<Unit>& units, const NoiseConfig& cfg) {
  cfg.validate();
  if (cfg.p <= 0.0 || units.empty()) return 0;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::discrete_distribution<int> op_dist(cfg.mix.begin(), cfg.mix.end());

  std::vector<Unit> out;
  out.reserve(units.size() + units.size() / 8 + 4);
  std::size_t ops = 0;
  const std::size_t n = units.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Unit u = units[i];
    if (!(unit(rng) < cfg.p)) {
      out.push_back(u);
      continue;
    }
    ++ops;
    const auto op = static_cast<NoiseOp>(op_dist(rng));
    bool done = false;
    switch (op) {
      case NoiseOp::Substitute:
        if (u.cp == U'r' && i + 1 < n && units[i + 1].cp == U'n') {
          out.push_back({U'm', u.tag});
          ++i;
          done = true;
        } else if (u.cp == U'm') {
          out.push_back({U'r', u.tag});
          out.push_back({U'n', u.tag});
          done = true;
        } else if (const auto it = confusions().find(u.cp); it != confusions().end()) {
          out.push_back({it->second, u.tag});
          done = true;
        }
        break;
      case NoiseOp::DeleteSpace:
        done = text::is_space(u.cp);
        break;
      case NoiseOp::InsertSpace:
        break;
      case NoiseOp::Transpose:
        if (i + 1 < n && units[i + 1].cp != u.cp) {
          out.push_back(units[i + 1]);
          out.push_back(u);
          ++i;
          done = true;
        }
        break;
    }
    if (!done) {
      out.push_back({U' ', -1});
      out.push_back(u);
    }
  }
  if (out.empty()) return 0;  // only deleted spaces: keep the input
  units = std::move(out);
  return ops;
}

std::string to_string(const std::vector<Unit>& units) {
  std::string s;
  for (const Unit& u : units) text::append_utf8(s, u.cp);
  return s;
}

}  // namespace

void NoiseConfig::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("noise probability must be in [0, 1]");
  double sum = 0.0;
  for (double m : mix) {
    if (!(m >= 0.0 && m <= 1.0)) throw Error("noise mix entries must be in [0, 1]");
    sum += m;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("noise mix must sum to 1");
}

Corruption corrupt_counted(std::string_view s, const NoiseConfig& cfg) {
  // Invalid bytes decode as U+FFFD; keep such input byte-exact by
  // corrupting only valid text.
  std::vector<Unit> units;
  for (std::size_t i = 0; i < s.size();) {
    const text::Decoded d = text::decode(s, i);
    if (d.cp == 0xFFFD && s.substr(i, d.len) != "\xEF\xBF\xBD") {
      cfg.validate();
      return {std::string(s), 0};
    }
    units.push_back({d.cp, text::is_space(d.cp) ? -1 : 0});
    i += d.len;
  }
  Corruption c;
  c.operations = corrupt_units(units, cfg);
  c.text = c.operations == 0 ? std::string(s) : to_string(units);
  return c;
}

NoisyLabeled corrupt_labeled(const LabeledSequence& seq, const NoiseConfig& cfg) {
  const std::string& original = seq.tokens.original();
  std::vector<int> byte_tag(original.size(), -1);
  for (std::size_t t = 0; t < seq.tokens.size(); ++t) {
    const Token& tok = seq.tokens[t];
    std::fill(byte_tag.begin() + static_cast<std::ptrdiff_t>(tok.byte_offset),
              byte_tag.begin() + static_cast<std::ptrdiff_t>(tok.end_offset()), static_cast<int>(seq.labels[t]));
  }
  std::vector<Unit> units;
  for (std::size_t i = 0; i < original.size();) {
    const text::Decoded d = text::decode(original, i);
    if (d.cp == 0xFFFD && original.substr(i, d.len) != "\xEF\xBF\xBD") {
      cfg.validate();
      return {seq, 0};
    }
    units.push_back({d.cp, byte_tag[i]});
    i += d.len;
  }
  NoisyLabeled out;
  out.operations = corrupt_units(units, cfg);
  if (out.operations == 0) {
    out.sequence = seq;
    return out;
  }

  // Per-byte tags of the corrupted string, then a majority vote per token.
  std::string corrupted;
  std::vector<int> tags;
  for (const Unit& u : units) {
    const std::size_t before = corrupted.size();
    text::append_utf8(corrupted, u.cp);
    tags.insert(tags.end(), corrupted.size() - before, u.tag);
  }
  TokenSequence tokens = tokenize(corrupted);
  std::vector<Label> labels(tokens.size(), Label::Oth);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    std::array<int, kLabelCount> votes{};
    int best = -1;
    for (std::size_t b = tokens[t].byte_offset; b < tokens[t].end_offset(); ++b) {
      const int tag = tags[b];
      if (tag < 0) continue;
      ++votes[static_cast<std::size_t>(tag)];
      if (best < 0 || votes[static_cast<std::size_t>(tag)] > votes[static_cast<std::size_t>(best)]) best = tag;
    }
    if (best >= 0) labels[t] = static_cast<Label>(best);
  }
  out.sequence = LabeledSequence(std::move(tokens), std::move(labels));
  return out;
}

}  // namespace refparse::gen
