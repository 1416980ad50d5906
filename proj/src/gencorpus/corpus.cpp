#include <fstream>

#include "refparse/error.hpp"
#include "refparse/evaluate.hpp"
#include "refparse/gencorpus.hpp"
#include "refparse/jsonl.hpp"

namespace refparse::gen {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Truth and assembled fields agree after value normalization.
bool consistent(const ParsedReference& assembled, const ParsedReference& truth) {
  if (assembled.size() != truth.size()) return false;
  for (const MetadataField& f : truth.fields()) {
    const auto v = assembled.get(f.type);
    if (!v || eval::normalize_value(*v) != eval::normalize_value(f.value)) return false;
  }
  return true;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

std::vector<GeneratedReference> generate_corpus(std::size_t n, const std::vector<StyleTemplate>& styles,
                                                const NoiseConfig& noise, std::uint64_t seed) {
  if (styles.empty()) throw Error("at least one style is required");
  noise.validate();
  std::vector<GeneratedReference> out(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 32)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      const auto idx = static_cast<std::size_t>(i);
      const std::uint64_t item_seed = derive_seed(seed, idx);
      std::mt19937_64 rng(item_seed);
      GeneratedReference& g = out[idx];
      g.index = idx;
      const StyleTemplate& style = styles[idx % styles.size()];
      g.style = style.name;
      g.record = random_record(rng);
      Rendered r = render_reference(g.record, style);
      g.clean = std::move(r.sequence);
      g.truth = std::move(r.truth);
      NoiseConfig item_noise = noise;
      item_noise.seed = derive_seed(noise.seed ^ item_seed, idx);
      NoisyLabeled noisy = corrupt_labeled(g.clean, item_noise);
      g.noise_operations = noisy.operations;
      g.noisy = std::move(noisy.sequence);
      g.xml = noisy.operations == 0 ? std::move(r.xml) : annotate::emit_annotation(g.noisy);
      g.flagged = g.noise_operations > 0 && !consistent(assemble_fields(g.noisy), g.truth);
      g.truth.source_string = g.noisy.tokens.original();
    } catch (...) {
#pragma omp critical(refparse_gen_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

void write_corpus(const std::vector<GeneratedReference>& corpus, const std::string& prefix) {
  std::vector<std::string> xml;
  xml.reserve(corpus.size());
  for (const auto& g : corpus) xml.push_back(g.xml);
  open_out(prefix + ".xml") << annotate::emit_corpus(xml);

  auto jsonl = open_out(prefix + ".jsonl");
  for (const auto& g : corpus) jsonl << to_json_line(g.truth) << '\n';

  auto txt = open_out(prefix + ".txt");
  for (const auto& g : corpus) txt << g.noisy.tokens.original() << '\n';

  auto fields = open_out(prefix + ".fields.jsonl");
  for (const auto& g : corpus) fields << fields_json(g.clean) << '\n';

  auto meta = open_out(prefix + ".meta.tsv");
  meta << "index\tstyle\tnoise_ops\tflagged\n";
  for (const auto& g : corpus) {
    meta << g.index << '\t' << g.style << '\t' << g.noise_operations << '\t' << (g.flagged ? 1 : 0) << '\n';
  }
}

}  // namespace refparse::gen
