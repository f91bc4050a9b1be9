#include "cli.hpp"

#include <omp.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <new>
#include <random>
#include <sstream>

#include "pcanon/errors.hpp"
#include "pcanon/hecke.hpp"
#include "pcanon/pcanonical.hpp"
#include "pcanon/realization.hpp"
#include "pcanon/soergel.hpp"
#include "pcanon/tilting.hpp"

namespace pcanon::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

CartanMatrix reorder(const CartanMatrix& g, const std::vector<std::string>& order) {
  if (order.empty()) return g;
  if (order.size() != g.rank()) throw InputError("--seed-order must list every generator once");
  std::vector<size_t> perm;
  for (const auto& lab : order) {
    auto i = g.index_of(lab);
    if (!i) throw InputError("unknown generator '" + lab + "' in --seed-order");
    if (std::find(perm.begin(), perm.end(), *i) != perm.end())
      throw InputError("generator '" + lab + "' repeated in --seed-order");
    perm.push_back(*i);
  }
  return g.reordered(perm);
}

CartanMatrix base_gcm(const JobSpec& s) {
  if (!s.gcm_file.empty() && !s.type.empty()) throw InputError("give either --type or --gcm-file, not both");
  if (!s.gcm_file.empty()) return CartanMatrix::from_json(read_json_file(s.gcm_file));
  if (!s.type.empty()) return CartanMatrix::named(s.type);
  throw InputError("a group is required (--type or --gcm-file)");
}

CartanMatrix load_gcm(const JobSpec& s) { return reorder(base_gcm(s), s.order); }

RootDatumF load_datum(const JobSpec& s) {
  if (!s.gcm_file.empty() && !s.type.empty()) throw InputError("give either --type or --gcm-file, not both");
  if (!s.gcm_file.empty()) return RootDatumF(CartanMatrix::from_json(read_json_file(s.gcm_file)));
  if (!s.type.empty()) return RootDatumF::named(s.type);
  throw InputError("a group is required (--type or --gcm-file)");
}

Exec exec_of(const JobSpec& s) { return s.threads == 1 ? Exec::Serial : Exec::Parallel; }

void check_bounds(const JobSpec& s) {
  if (s.max_length < 1) throw InputError("--max-length must be positive");
  if (s.weight_bound < 0) throw InputError("--weight-bound must be nonnegative");
  check_characteristic(s.prime);
}

std::vector<Gen> parabolic_of(const JobSpec& s, const CoxeterSystem& sys) {
  std::vector<Gen> J;
  if (s.parabolic.empty()) {
    if (sys.gcm().is_finite_type() || !sys.gcm().index_of("s0"))
      throw InputError("--parabolic is required unless the group is affine with generator s0");
    for (Gen g = 0; g < sys.rank(); ++g)
      if (sys.labels()[g] != "s0") J.push_back(g);
    return J;
  }
  for (const auto& lab : s.parabolic) {
    auto i = sys.gcm().index_of(lab);
    if (!i) throw InputError("unknown generator '" + lab + "' in --parabolic");
    J.push_back(static_cast<Gen>(*i));
  }
  std::sort(J.begin(), J.end());
  J.erase(std::unique(J.begin(), J.end()), J.end());
  return J;
}

std::string format_weight(const Weight& w) {
  if (w.size() == 1) return std::to_string(w[0]);
  std::string out = "(";
  for (size_t i = 0; i < w.size(); ++i) out += (i ? "," : "") + std::to_string(w[i]);
  return out + ")";
}

std::vector<Element> sorted_elements(const CoxeterGroup& W, long max_length) {
  auto elems = W.enumerate(static_cast<size_t>(max_length));
  std::sort(elems.begin(), elems.end());
  return elems;
}

json group_parameters(const CartanMatrix& g) { return g.to_json(); }

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

json Table::to_json() const {
  return json{{"command", command}, {"parameters", parameters}, {"columns", columns}, {"rows", rows}};
}

Table Table::from_json(const json& j) {
  try {
    Table t;
    t.command = j.at("command").get<std::string>();
    t.parameters = j.at("parameters");
    t.columns = j.at("columns").get<std::vector<std::string>>();
    t.rows = j.at("rows").get<std::vector<std::vector<std::string>>>();
    for (const auto& r : t.rows)
      if (r.size() != t.columns.size()) throw InputError("table row has the wrong number of cells");
    return t;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed table: ") + e.what());
  }
}

Table cmd_kl(const JobSpec& spec) {
  check_bounds(spec);
  CartanMatrix g = load_gcm(spec);
  CoxeterGroup W(coxeter_from_gcm(g));
  HeckeAlgebra H(W);
  Table t{"kl", {{"group", group_parameters(g)}, {"max_length", spec.max_length}}, {"w", "y", "h_yw"}, {}};
  for (const Element& w : sorted_elements(W, spec.max_length)) {
    HeckeElement b = H.kl_basis(w);
    for (const auto& [y, c] : b.terms())
      t.rows.push_back({W.system().format_word(w.word()), W.system().format_word(y.word()), c.to_string()});
  }
  return t;
}

Table cmd_pkl(const JobSpec& spec) {
  check_bounds(spec);
  CartanMatrix g = load_gcm(spec);
  PCanonicalBasis B(g, exec_of(spec));
  const CoxeterSystem& sys = B.group().system();
  Table t{"pkl",
          {{"group", group_parameters(g)}, {"prime", spec.prime}, {"max_length", spec.max_length}},
          {"w", "x", "coefficient"},
          {}};
  for (const PCanonicalEntry& e : B.entries_up_to(spec.prime, static_cast<size_t>(spec.max_length)))
    for (const auto& [x, c] : e.expansion_in_kl)
      t.rows.push_back({sys.format_word(e.w.word()), sys.format_word(x.word()), c.to_string()});
  return t;
}

Table cmd_antispherical(const JobSpec& spec) {
  check_bounds(spec);
  CartanMatrix g = load_gcm(spec);
  PCanonicalBasis B(g, exec_of(spec));
  const CoxeterSystem& sys = B.group().system();
  std::vector<Gen> J = parabolic_of(spec, sys);
  std::vector<std::string> labels;
  for (Gen s : J) labels.push_back(sys.labels()[s]);
  Table t{"antispherical",
          {{"group", group_parameters(g)},
           {"prime", spec.prime},
           {"max_length", spec.max_length},
           {"parabolic", labels}},
          {"w", "y", "n_yw"},
          {}};
  for (const AntisphericalKL& row : B.pkl_table(spec.prime, static_cast<size_t>(spec.max_length), J))
    t.rows.push_back({sys.format_word(row.w.word()), sys.format_word(row.y.word()), row.poly.to_string()});
  return t;
}

Table cmd_tilt(const JobSpec& spec) {
  check_bounds(spec);
  RootDatumF datum = load_datum(spec);
  TiltingCharacters T(datum, spec.prime, exec_of(spec), spec.order);
  const CoxeterSystem& sys = T.affine_group().group().system();
  Table t{"tilt",
          {{"group", group_parameters(datum.cartan)},
           {"prime", spec.prime},
           {"weight_bound", spec.weight_bound},
           {"affine_order", sys.labels()}},
          {"w", "lambda", "dim_T", "y", "mu", "multiplicity", "dim_nabla"},
          {}};
  for (const TiltingCharacterRow& row : T.table(spec.weight_bound)) {
    for (auto it = row.multiplicities.rbegin(); it != row.multiplicities.rend(); ++it)
      t.rows.push_back({sys.format_word(row.w.word()), format_weight(row.highest_weight), row.dimension.get_str(),
                        sys.format_word(it->y.word()), format_weight(it->weight), std::to_string(it->multiplicity),
                        weyl_dimension(datum, it->weight).get_str()});
  }
  return t;
}

Table cmd_pairing(const JobSpec& spec) {
  CartanMatrix g = load_gcm(spec);
  if (spec.method != "hecke" && spec.method != "soergel" && spec.method != "both")
    throw InputError("--method must be hecke, soergel or both");
  CoxeterGroup W(coxeter_from_gcm(g));
  HeckeAlgebra H(W);
  const CoxeterSystem& sys = W.system();
  std::vector<std::pair<Word, Word>> pairs;
  if (spec.left.empty() != spec.right.empty()) throw InputError("give both --left and --right, or neither");
  if (!spec.left.empty()) {
    pairs.emplace_back(sys.parse_word(spec.left), sys.parse_word(spec.right));
  } else {
    if (spec.max_length < 1) throw InputError("--max-length must be positive");
    auto elems = sorted_elements(W, spec.max_length);
    for (const auto& v : elems)
      for (const auto& w : elems) pairs.emplace_back(v.word(), w.word());
  }
  std::optional<SoergelCalculus> calc;
  if (spec.method != "hecke") calc.emplace(faithful_realization(g));
  Table t{"pairing", {{"group", group_parameters(g)}, {"method", spec.method}}, {"left", "right"}, {}};
  if (spec.left.empty()) t.parameters["max_length"] = spec.max_length;
  if (spec.method != "soergel") t.columns.push_back("pairing");
  if (spec.method != "hecke") t.columns.push_back("hom_rank");
  for (const auto& [v, w] : pairs) {
    std::vector<std::string> row{sys.format_word(v), sys.format_word(w)};
    if (spec.method != "soergel") row.push_back(pairing(H.bs_element(v), H.bs_element(w)).to_string());
    if (spec.method != "hecke") row.push_back(calc->hom_graded_rank(v, w).to_string());
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_selftest(const JobSpec& spec) {
  Exec exec = exec_of(spec);
  std::vector<std::pair<std::string, std::function<std::string()>>> checks;

  checks.emplace_back("hecke associativity and unit", [] {
    std::mt19937 rng(7);
    size_t n = 0;
    for (const char* type : {"A2", "B2", "A1~"}) {
      CoxeterGroup W(coxeter_from_gcm(CartanMatrix::named(type)));
      HeckeAlgebra H(W);
      auto elems = W.enumerate(4);
      std::uniform_int_distribution<size_t> pick(0, elems.size() - 1);
      for (int i = 0; i < 60; ++i, ++n) {
        auto a = H.standard(elems[pick(rng)]), b = H.standard(elems[pick(rng)]), c = H.standard(elems[pick(rng)]);
        if (H.multiply(H.multiply(a, b), c) != H.multiply(a, H.multiply(b, c)))
          throw InconsistencyError(std::string("associativity fails in ") + type);
        if (H.multiply(H.standard(W.identity()), a) != a || H.multiply(a, H.standard(W.identity())) != a)
          throw InconsistencyError(std::string("unit fails in ") + type);
      }
    }
    return std::to_string(n) + " triples";
  });

  checks.emplace_back("KL inversion", [] {
    size_t n = 0;
    for (const char* type : {"A2", "B2", "A1~"}) {
      CoxeterGroup W(coxeter_from_gcm(CartanMatrix::named(type)));
      HeckeAlgebra H(W);
      InversionReport r = H.kl_inversion_check(5);
      if (!r.ok) throw InconsistencyError(std::string(type) + ": " + r.failure);
      n += r.elements;
    }
    return std::to_string(n) + " elements";
  });

  checks.emplace_back("hom ranks match the pairing", [] {
    CartanMatrix g = CartanMatrix::named("A2");
    CoxeterGroup W(coxeter_from_gcm(g));
    HeckeAlgebra H(W);
    SoergelCalculus calc(faithful_realization(g));
    auto elems = W.enumerate(2);
    for (const auto& v : elems)
      for (const auto& w : elems)
        if (calc.hom_graded_rank(v.word(), w.word()) != pairing(H.bs_element(v.word()), H.bs_element(w.word())))
          throw InconsistencyError("mismatch at " + W.system().format_word(v.word()) + " / " +
                                   W.system().format_word(w.word()));
    return std::to_string(elems.size() * elems.size()) + " pairs";
  });

  checks.emplace_back("characteristic 0 gives the KL basis", [exec] {
    size_t n = 0;
    for (const char* type : {"A2", "B2"}) {
      PCanonicalBasis B(CartanMatrix::named(type), exec);
      for (const auto& e : B.entries_up_to(0, 4)) {
        if (e.expansion_in_kl.size() != 1) throw InconsistencyError(std::string("deviation in ") + type);
        ++n;
      }
    }
    return std::to_string(n) + " elements";
  });

  checks.emplace_back("B2 in characteristic 2", [exec] {
    PCanonicalBasis B(CartanMatrix::named("B2"), exec);
    size_t deviations = 0;
    for (const auto& e : B.entries_up_to(2, 4)) {
      if (e.expansion_in_kl.size() == 1) continue;
      if (e.w.length() != 3 || e.expansion_in_kl.size() != 2) throw InconsistencyError("unexpected deviation");
      ++deviations;
    }
    for (unsigned long p : {3ul, 5ul})
      for (const auto& e : B.entries_up_to(p, 4))
        if (e.expansion_in_kl.size() != 1) throw InconsistencyError("deviation for p = " + std::to_string(p));
    if (deviations != 1) throw InconsistencyError(std::to_string(deviations) + " deviations");
    return std::string("one deviation at length 3");
  });

  checks.emplace_back("antispherical vanishing", [exec] {
    size_t n = 0;
    PCanonicalBasis B(CartanMatrix::named("A1~"), exec);
    const CoxeterGroup& W = B.group();
    std::vector<Gen> J{1};
    for (unsigned long p : {0ul, 2ul, 3ul})
      for (const auto& w : W.enumerate(5)) {
        AntisphericalElement a = B.antispherical_image(w, p, J);
        bool min = W.is_min_coset_rep(w, J);
        if (!min && !a.value.is_zero()) throw InconsistencyError("nonzero image outside ^f W");
        if (min && a.value.coeff(w) != LaurentPoly(1)) throw InconsistencyError("image is not unitriangular");
        ++n;
      }
    return std::to_string(n) + " images";
  });

  checks.emplace_back("tilting rows", [exec] {
    RootDatumF d = RootDatumF::named("SL2");
    size_t n = 0;
    for (unsigned long p : {3ul, 5ul}) {
      TiltingCharacters T(d, p, exec);
      for (const auto& row : T.table(static_cast<long>(6 * p))) {
        mpz_class dim = 0;
        for (const auto& m : row.multiplicities) dim += m.multiplicity * weyl_dimension(d, m.weight);
        if (dim != row.dimension) throw InconsistencyError("dimension column does not add up");
        ++n;
      }
    }
    return std::to_string(n) + " rows";
  });

  Table t{"selftest", json::object(), {"check", "result", "detail"}, {}};
  for (const auto& [name, run] : checks) {
    try {
      t.rows.push_back({name, "PASS", run()});
    } catch (const std::exception& e) {
      t.rows.push_back({name, "FAIL", e.what()});
    }
  }
  return t;
}

json cache_key(const JobSpec& s) {
  json key{{"version", kAlgorithmVersion}, {"command", s.command}};
  if (s.command == "tilt") {
    key["group"] = load_datum(s).cartan.to_json();
    key["weight_bound"] = s.weight_bound;
  } else {
    key["group"] = load_gcm(s).to_json();
    key["max_length"] = s.max_length;
  }
  key["order"] = s.order;
  key["prime"] = s.prime;
  key["parabolic"] = s.parabolic;
  key["left"] = s.left;
  key["right"] = s.right;
  key["method"] = s.method;
  return key;
}

namespace {

fs::path cache_path(const std::string& dir, const json& key) {
  std::ostringstream name;
  name << key.at("command").get<std::string>() << '-' << std::hex << std::setw(16) << std::setfill('0')
       << fnv1a(key.dump()) << ".json";
  return fs::path(dir) / name.str();
}

}  // namespace

std::optional<Table> cache_load(const std::string& dir, const json& key) {
  fs::path p = cache_path(dir, key);
  std::ifstream in(p);
  if (!in) return std::nullopt;
  try {
    json j = json::parse(in);
    if (j.value("algorithm_version", -1) != kAlgorithmVersion) return std::nullopt;
    if (j.at("key") != key) return std::nullopt;
    return Table::from_json(j.at("table"));
  } catch (const std::exception&) {
    // Unreadable entries are recomputed and overwritten.
    return std::nullopt;
  }
}

void cache_store(const std::string& dir, const json& key, const Table& t) {
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create cache directory '" + dir + "': " + ec.message());
  fs::path final_path = cache_path(dir, key);
  fs::path tmp = final_path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp);
    out << json{{"algorithm_version", kAlgorithmVersion}, {"key", key}, {"table", t.to_json()}}.dump() << '\n';
    if (!out) throw ResourceError("cannot write cache file '" + tmp.string() + "'");
  }
  fs::rename(tmp, final_path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ResourceError("cannot move cache file into place: " + ec.message());
  }
}

Table run_command(const JobSpec& spec) {
  static const std::map<std::string, Table (*)(const JobSpec&)> commands{
      {"kl", cmd_kl},     {"pkl", cmd_pkl},         {"antispherical", cmd_antispherical},
      {"tilt", cmd_tilt}, {"pairing", cmd_pairing}, {"selftest", cmd_selftest}};
  auto it = commands.find(spec.command);
  if (it == commands.end()) throw InputError("unknown command '" + spec.command + "'");
  if (spec.cache_dir.empty() || spec.command == "selftest") return it->second(spec);
  json key = cache_key(spec);
  if (auto hit = cache_load(spec.cache_dir, key)) return *hit;
  Table t = it->second(spec);
  cache_store(spec.cache_dir, key, t);
  return t;
}

namespace {

std::string csv_cell(const std::string& c) {
  if (c.find_first_of(",\"\n") == std::string::npos) return c;
  std::string out = "\"";
  for (char ch : c) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string render(const Table& t, Format f) {
  std::ostringstream out;
  switch (f) {
    case Format::Json:
      out << t.to_json().dump(2) << '\n';
      break;
    case Format::Csv: {
      auto line = [&](const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_cell(cells[i]);
        out << '\n';
      };
      line(t.columns);
      for (const auto& r : t.rows) line(r);
      break;
    }
    case Format::Text: {
      std::vector<size_t> width;
      for (const auto& c : t.columns) width.push_back(c.size());
      for (const auto& r : t.rows)
        for (size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
      auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (size_t i = 0; i < cells.size(); ++i) {
          s += cells[i];
          if (i + 1 < cells.size()) s += std::string(width[i] - cells[i].size() + 2, ' ');
        }
        out << s << '\n';
      };
      line(t.columns);
      std::vector<std::string> rule;
      for (size_t w : width) rule.push_back(std::string(w, '-'));
      line(rule);
      for (const auto& r : t.rows) line(r);
      break;
    }
  }
  return out.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kazhdan-Lusztig, p-canonical and tilting character tables"};
  app.require_subcommand(1);
  JobSpec spec;
  const std::map<std::string, Format> formats{{"json", Format::Json}, {"csv", Format::Csv}, {"text", Format::Text}};

  auto add_group = [&](CLI::App* sub) {
    auto* type = sub->add_option("--type", spec.type, "Named type, e.g. A2, B2, A1~ (or SL2 for tilt)")
                     ->envname("PCANON_TYPE");
    sub->add_option("--gcm-file", spec.gcm_file, "JSON file with a Cartan matrix")
        ->envname("PCANON_GCM_FILE")
        ->excludes(type);
    sub->add_option("--seed-order", spec.order, "Generator labels in the desired order")
        ->delimiter(',')
        ->envname("PCANON_SEED_ORDER");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", spec.format, "json, csv or text")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
        ->envname("PCANON_FORMAT");
    sub->add_option("--cache-dir", spec.cache_dir, "Directory for cached tables")->envname("PCANON_CACHE_DIR");
    sub->add_option("--threads", spec.threads, "Worker threads (1 runs the serial path)")
        ->check(CLI::NonNegativeNumber)
        ->envname("PCANON_THREADS");
  };
  auto add_prime = [&](CLI::App* sub) {
    sub->add_option("--prime", spec.prime, "Characteristic: 0 or a prime")->envname("PCANON_PRIME");
  };
  auto add_length = [&](CLI::App* sub) {
    sub->add_option("--max-length", spec.max_length, "Largest length")->envname("PCANON_MAX_LENGTH");
  };

  std::map<std::string, CLI::App*> subs;
  subs["kl"] = app.add_subcommand("kl", "Kazhdan-Lusztig polynomials");
  subs["pkl"] = app.add_subcommand("pkl", "p-canonical basis in terms of the KL basis");
  subs["antispherical"] = app.add_subcommand("antispherical", "Antispherical p-KL polynomials");
  subs["tilt"] = app.add_subcommand("tilt", "Tilting characters in the principal block");
  subs["pairing"] = app.add_subcommand("pairing", "Standard pairing and graded Hom ranks");
  subs["selftest"] = app.add_subcommand("selftest", "Run the built-in invariant checks");
  for (const auto& [name, sub] : subs) {
    add_output(sub);
    if (name == "selftest") continue;
    add_group(sub);
  }
  for (const char* name : {"kl", "pkl", "antispherical", "pairing"}) add_length(subs[name]);
  for (const char* name : {"pkl", "antispherical", "tilt"}) add_prime(subs[name]);
  subs["antispherical"]
      ->add_option("--parabolic", spec.parabolic, "Generators of the finite parabolic (default: all but s0)")
      ->delimiter(',')
      ->envname("PCANON_PARABOLIC");
  subs["tilt"]->add_option("--weight-bound", spec.weight_bound, "Bound on <lambda, highest coroot>")
      ->envname("PCANON_WEIGHT_BOUND");
  subs["pairing"]->add_option("--left", spec.left, "Left expression, e.g. s1,s2");
  subs["pairing"]->add_option("--right", spec.right, "Right expression");
  subs["pairing"]
      ->add_option("--method", spec.method, "hecke, soergel or both")
      ->check(CLI::IsMember({"hecke", "soergel", "both"}))
      ->envname("PCANON_METHOD");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) spec.command = name;

  try {
    if (spec.threads > 0) omp_set_num_threads(spec.threads);
    Table t = run_command(spec);
    out << render(t, spec.format);
    if (spec.command == "selftest")
      for (const auto& r : t.rows)
        if (r[1] != "PASS") return 3;
    return 0;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 1;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << '\n';
    return 2;
  } catch (const std::bad_alloc&) {
    err << "resource limit: out of memory\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal inconsistency: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace pcanon::cli
