// Random bibliographic records drawn from fixed word lists.

#include <algorithm>
#include <array>
#include <cmath>

#include "refparse/error.hpp"
#include "refparse/gencorpus.hpp"
#include "refparse/text.hpp"

namespace refparse::gen {

namespace {

constexpr std::string_view kGivenNames[] = {
    "Dominika", "Pawel",   "Mateusz",  "Piotr",    "Lukasz",   "Maria",    "John",     "Wei",     "Hiroshi",
    "Ana",      "José",    "Françoise", "Søren",   "Ahmed",    "Olga",     "Jürgen",   "Elena",   "Rajesh",
    "Yuki",     "Laura",   "Michael",  "Sarah",    "David",    "Anna",     "Thomas",   "Kenji",   "Fatima",
    "Carlos",   "Ingrid",  "Pierre",   "Giulia",   "Marta",    "Ivan",     "Nikolai",  "Emma",    "Lucas",
    "Sofia",    "Mehmet",  "Aisha",    "Robert",   "Jennifer", "Min",      "Xiaoming", "Priya",   "Oluwaseun",
    "Agnieszka", "Tomasz", "Katarzyna", "Henrik",  "Beatriz",  "Andrea",   "Chiara",   "Stefan",  "Ewa",
    "Zoë",      "Ólafur",  "Mariusz",  "Helen",    "Omar",     "Daniel",   "Paul",     "Jan",     "Lena"};

constexpr std::string_view kSurnames[] = {
    "Tkaczyk",   "Szostek",   "Fedoryszak", "Dendek",    "Bolikowski", "Smith",    "Müller",     "García",
    "Nowak",     "Kowalski",  "Wang",       "Li",        "Zhang",      "Tanaka",   "Suzuki",     "Rossi",
    "Dubois",    "Johansson", "Ivanov",     "Novák",     "O'Brien",    "Garcia-Lopez", "Schmidt", "Patel",
    "Kim",       "Nguyen",    "Silva",      "Yılmaz",    "Łukasiewicz", "Østergaard", "Brown",    "Taylor",
    "Anderson",  "Martin",    "Lefèvre",    "Kovačević", "Hernández",  "Fischer",  "Weber",      "Sato",
    "Collins",   "Sheridan",  "Beel",       "Chen",      "Liu",        "Yang",     "Huang",      "Wiśniewski",
    "Kamińska",  "Andersen",  "Nielsen",    "Moreau",    "Bianchi",    "Romano",   "Costa",      "Pereira",
    "Okafor",    "Haddad",    "Sharma",     "Gupta",     "Ito",        "Park",     "Lee",        "Jones",
    "van der Berg", "de la Cruz", "Da Silva", "von Neumann", "Van Dyke", "El Amrani", "Mac Donald", "Le Roux"};

constexpr std::string_view kTitleAdjectives[] = {
    "automatic", "efficient",  "robust",     "scalable",   "novel",        "structured", "comparative",
    "selective", "catalytic",  "asymmetric", "stable",     "supervised",   "deep",       "hierarchical",
    "sparse",    "functional", "porous",     "conductive", "experimental", "theoretical", "rapid",
    "green",     "high-throughput", "one-pot", "multi-scale", "bibliographic", "open", "large-scale"};

constexpr std::string_view kTitleNouns[] = {
    "extraction",  "metadata",   "synthesis",   "catalysts",    "polymers",   "analysis",   "framework",
    "references",  "citations",  "networks",    "nanoparticles", "membranes", "oxidation",  "reduction",
    "ligands",     "complexes",  "spectroscopy", "simulations", "documents",  "parsing",    "retrieval",
    "classification", "evaluation", "electrodes", "batteries",  "sensors",    "crystals",   "surfaces",
    "models",      "algorithms", "literature",  "compounds",    "reactions",  "materials",  "graphs",
    "proteins",    "enzymes",    "solvents",    "thin films",   "data sets",  "benchmarks", "workflows"};

constexpr std::string_view kTitleLinks[] = {"of", "for", "in", "from", "with", "via", "on", "using", "and"};

constexpr std::string_view kAcronyms[] = {"CERMINE", "GROBID", "ParsCit", "DeepRef", "NMR", "DFT", "XPS", "MOF",
                                          "CRF", "LSTM", "OCR", "PDF", "HPLC", "TEM", "SERS", "BERT"};

struct Word {
  std::string_view full;
  std::string_view abbrev;  // empty: kept as is
};

constexpr Word kDisciplines[][3] = {
    {{"Chemistry", "Chem."}, {}, {}},
    {{"Physical", "Phys."}, {"Chemistry", "Chem."}, {}},
    {{"Organic", "Org."}, {"Chemistry", "Chem."}, {}},
    {{"Materials", "Mater."}, {"Science", "Sci."}, {}},
    {{"Document", "Doc."}, {"Analysis", "Anal."}, {}},
    {{"Information", "Inf."}, {"Retrieval", "Retr."}, {}},
    {{"Computational", "Comput."}, {"Linguistics", "Linguist."}, {}},
    {{"Applied", "Appl."}, {"Physics", "Phys."}, {}},
    {{"Catalysis", "Catal."}, {}, {}},
    {{"Polymer", "Polym."}, {"Science", "Sci."}, {}},
    {{"Medicinal", "Med."}, {"Chemistry", "Chem."}, {}},
    {{"Machine", "Mach."}, {"Learning", "Learn."}, {}},
    {{"Digital", "Digit."}, {"Libraries", "Libr."}, {}},
    {{"Analytical", "Anal."}, {"Chemistry", "Chem."}, {}},
    {{"Biochemistry", "Biochem."}, {}, {}},
    {{"Spectroscopy", "Spectrosc."}, {}, {}},
    {{"Inorganic", "Inorg."}, {"Chemistry", "Chem."}, {}},
    {{"Chemical", "Chem."}, {"Engineering", "Eng."}, {}},
    {{"Pattern", "Pattern"}, {"Recognition", "Recognit."}, {}},
    {{"Natural", "Nat."}, {"Language", "Lang."}, {"Processing", "Process."}},
    {{"Computer", "Comput."}, {"Vision", "Vis."}, {}},
    {{"Solid", "Solid"}, {"State", "State"}, {"Chemistry", "Chem."}},
    {{"Environmental", "Environ."}, {"Science", "Sci."}, {}},
    {{"Surface", "Surf."}, {"Science", "Sci."}, {}},
    {{"Electrochemistry", "Electrochem."}, {}, {}},
    {{"Crystal", "Cryst."}, {"Growth", "Growth"}, {}},
    {{"Molecular", "Mol."}, {"Biology", "Biol."}, {}},
    {{"Scientometrics", "Scientometrics"}, {}, {}},
};

constexpr Word kQualifiers[] = {{"American", "Am."}, {"European", "Eur."}, {"British", "Br."},
                                {"Asian", "Asian"},  {"Royal", "R."},       {"Nordic", "Nord."}};

constexpr std::string_view kConferenceOrgs[] = {"ACM", "IEEE", "ACL", "SIAM", "AAAI", "IAPR"};

constexpr std::string_view kOrganizations[] = {
    "Association for Computing Machinery", "IEEE Computer Society", "Springer", "Elsevier",
    "Royal Society of Chemistry", "American Chemical Society", "University of Cambridge",
    "Max Planck Institute for Informatics", "Wiley", "National Institute of Standards and Technology"};

constexpr std::string_view kDoiPrefixes[] = {"1007", "1016", "1021", "1039", "1002", "1145", "1109", "1093", "1063"};

template <class T, std::size_t N>
const T& pick(std::mt19937_64& rng, const T (&arr)[N]) {
  return arr[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

bool chance(std::mt19937_64& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

struct Named {
  std::string full;
  std::string abbrev;
};

void append_word(Named& n, const Word& w, bool keep_in_abbrev = true) {
  if (!n.full.empty()) n.full += ' ';
  n.full += w.full;
  if (!keep_in_abbrev) return;
  if (!n.abbrev.empty()) n.abbrev += ' ';
  n.abbrev += w.abbrev.empty() ? w.full : w.abbrev;
}

void append_discipline(Named& n, std::mt19937_64& rng) {
  for (const Word& w : pick(rng, kDisciplines)) {
    if (!w.full.empty()) append_word(n, w);
  }
}

Named random_source(std::mt19937_64& rng) {
  Named n;
  const Word journal{"Journal", "J."};
  const Word of{"of", ""};
  switch (uniform(rng, 0, 9)) {
    case 0:
      append_word(n, journal), append_word(n, of, false), append_discipline(n, rng);
      break;
    case 1:
      append_discipline(n, rng), append_word(n, {"Letters", "Lett."});
      break;
    case 2:
      append_word(n, {"International", "Int."}), append_word(n, journal), append_word(n, of, false);
      append_discipline(n, rng);
      break;
    case 3:
      append_word(n, {"International", "Int."}), append_word(n, journal), append_word(n, {"on", ""}, false);
      append_discipline(n, rng), append_word(n, {"and", ""}, false), append_discipline(n, rng);
      break;
    case 4:
      append_word(n, {"Advances", "Adv."}), append_word(n, {"in", ""}, false), append_discipline(n, rng);
      break;
    case 5:
      append_discipline(n, rng), append_word(n, {"Reviews", "Rev."});
      break;
    case 6: {
      append_word(n, journal), append_word(n, of, false), append_word(n, {"the", ""}, false);
      append_word(n, pick(rng, kQualifiers)), append_word(n, {"Chemical", "Chem."});
      append_word(n, {"Society", "Soc."});
      break;
    }
    case 7:
      append_word(n, pick(rng, kQualifiers)), append_word(n, journal), append_word(n, of, false);
      append_discipline(n, rng);
      break;
    case 8:
      append_word(n, {"Transactions", "Trans."}), append_word(n, {"on", ""}, false), append_discipline(n, rng);
      break;
    default: {
      append_word(n, {"Proceedings", "Proc."}), append_word(n, of, false), append_word(n, {"the", ""}, false);
      const std::string org(pick(rng, kConferenceOrgs));
      append_word(n, {org, org});
      append_word(n, chance(rng, 0.5) ? Word{"Conference", "Conf."} : Word{"Symposium", "Symp."});
      append_word(n, {"on", ""}, false), append_discipline(n, rng);
      break;
    }
  }
  return n;
}

std::string random_title(std::mt19937_64& rng) {
  std::string t;
  auto add = [&](std::string_view w) {
    if (!t.empty()) t += ' ';
    t += w;
  };
  const bool question = chance(rng, 0.05);
  if (question) add("Can");
  add(pick(rng, kTitleAdjectives));
  add(pick(rng, kTitleNouns));
  const int clauses = uniform(rng, 1, 3);
  for (int c = 0; c < clauses; ++c) {
    add(pick(rng, kTitleLinks));
    if (chance(rng, 0.5)) add(pick(rng, kTitleAdjectives));
    add(pick(rng, kTitleNouns));
  }
  if (chance(rng, 0.08)) add(chance(rng, 0.5) ? "in 2D" : "in 3D");
  // Sentence case.
  const text::Decoded d = text::decode(t, 0);
  std::string head;
  text::append_utf8(head, text::to_upper(d.cp));
  t = head + t.substr(d.len);
  if (question) t += '?';
  if (!question && chance(rng, 0.15)) t = std::string(pick(rng, kAcronyms)) + ": " + t;
  return t;
}

std::string digits(std::mt19937_64& rng, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += static_cast<char>('0' + uniform(rng, 0, 9));
  return s;
}

std::string random_doi(std::mt19937_64& rng, int year) {
  std::string d = "10." + std::string(pick(rng, kDoiPrefixes)) + "/";
  const std::string yy = std::to_string(year % 100 + 100).substr(1);
  switch (uniform(rng, 0, 3)) {
    case 0: d += "s" + digits(rng, 5) + "-0" + yy + "-" + digits(rng, 4) + "-" + digits(rng, 1); break;
    case 1: d += "j.cej." + std::to_string(year) + "." + digits(rng, 2) + "." + digits(rng, 3); break;
    case 2: d += "c" + digits(rng, 1) + "cc" + digits(rng, 5) + "a"; break;
    default: d += "jacs." + digits(rng, 1) + "b" + digits(rng, 5); break;
  }
  return d;
}

}  // namespace

void SourceRecord::validate() const {
  if (year < 1900 || year > 2099) throw Error("record year out of range: " + std::to_string(year));
  if (fpage && lpage && *fpage > *lpage) throw Error("record first page exceeds last page");
  if (lpage && !fpage) throw Error("record has a last page without a first page");
  if (authors.empty()) throw Error("record has no authors");
  for (const Author& a : authors) {
    if (text::trim(a.surname).empty()) throw Error("record author without surname");
  }
}

SourceRecord example_record() {
  SourceRecord r;
  r.authors = {{"Dominika", "Tkaczyk"},
               {"Pawel", "Szostek"},
               {"Mateusz", "Fedoryszak"},
               {"Piotr Jan", "Dendek"},
               {"Lukasz", "Bolikowski"}};
  r.title = "CERMINE: automatic extraction of structured metadata from scientific literature";
  r.source = "International Journal on Document Analysis and Recognition";
  r.source_abbrev = "Int. J. Doc. Anal. Recognit";
  r.year = 2015;
  r.volume = 18;
  r.issue = 4;
  r.fpage = 317;
  r.lpage = 335;
  r.doi = "10.1007/s10032-015-0249-8";
  return r;
}

SourceRecord random_record(std::mt19937_64& rng) {
  SourceRecord r;
  static constexpr std::array<double, 9> kAuthorCounts = {0.2, 0.25, 0.2, 0.15, 0.1, 0.04, 0.03, 0.02, 0.01};
  std::discrete_distribution<int> author_count(kAuthorCounts.begin(), kAuthorCounts.end());
  const int n_authors = author_count(rng) + 1;
  for (int k = 0; k < n_authors; ++k) {
    Author a;
    a.given = std::string(pick(rng, kGivenNames));
    if (chance(rng, 0.2)) a.given += " " + std::string(pick(rng, kGivenNames));
    a.surname = std::string(pick(rng, kSurnames));
    r.authors.push_back(std::move(a));
  }
  r.title = random_title(rng);
  Named src = random_source(rng);
  r.source = std::move(src.full);
  r.source_abbrev = std::move(src.abbrev);
  if (r.source_abbrev.ends_with('.')) r.source_abbrev.pop_back();

  const double age = std::abs(std::normal_distribution<double>(0.0, 12.0)(rng));
  r.year = std::max(1950, 2024 - static_cast<int>(age));
  if (chance(rng, 0.9)) r.volume = uniform(rng, 1, 250);
  if (chance(rng, 0.65)) r.issue = uniform(rng, 1, 24);
  if (chance(rng, 0.95)) {
    r.fpage = uniform(rng, 1, 3000);
    if (chance(rng, 0.85)) r.lpage = *r.fpage + uniform(rng, 1, 40);
  }
  if (chance(rng, 0.35)) {
    r.doi = random_doi(rng, r.year);
  } else if (chance(rng, 0.12)) {
    r.url = "https://www." + std::string(chance(rng, 0.5) ? "sciencedirect.com/science/article/pii/S"
                                                           : "mdpi.com/") +
            digits(rng, 8);
  } else if (chance(rng, 0.06)) {
    const int month = uniform(rng, 1, 12);
    r.arxiv = std::to_string(uniform(rng, 10, 23)) + (month < 10 ? "0" : "") + std::to_string(month) + "." +
              digits(rng, 5);
  }
  if (chance(rng, 0.08)) r.organization = std::string(pick(rng, kOrganizations));
  return r;
}

}  // namespace refparse::gen
