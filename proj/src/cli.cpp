#include "apn/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "apn/bounds.hpp"
#include "apn/diffanal.hpp"
#include "apn/error.hpp"
#include "apn/geomcrit.hpp"
#include "apn/search.hpp"
#include "apn/sigma.hpp"

namespace apn {

namespace {

using Json = nlohmann::ordered_json;

enum class Format { Json, Csv, Text };

struct RunConfig {
  std::string command;
  std::string sub;
  unsigned m = 0;
  std::string modulus;
  std::string poly;
  std::vector<std::string> coefs;
  std::string d;
  std::optional<unsigned> r;
  std::string kind = "irreducible";
  std::string family;
  std::string nonzero;
  std::optional<std::uint64_t> budget;
  std::string format = "text";
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::string checkpoint;
  std::string resume;
  bool singular = false;
};

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

std::uint64_t parse_u64(const std::string& s, int base, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, base);
    if (used != s.size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, std::string("bad ") + what + " '" + s + "'");
  }
}

// Accepts "0x..." or bare hex.
std::uint64_t parse_hex(std::string s, const char* what) {
  if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) s = s.substr(2);
  if (s.empty()) throw Error(ErrorCode::ParseError, std::string("empty ") + what);
  return parse_u64(s, 16, what);
}

class Runner {
 public:
  Runner(const RunConfig& c, std::ostream& out) : c_(c), out_(out) {
    if (c.format == "json") fmt_ = Format::Json;
    else if (c.format == "csv") fmt_ = Format::Csv;
    else fmt_ = Format::Text;
  }

  int run() {
    if (c_.workers) omp_set_num_threads(static_cast<int>(c_.workers));
    if (c_.command == "apn-test") return apn_test();
    if (c_.command == "sigma") return sigma();
    if (c_.command == "bounds") return bounds();
    if (c_.command == "criteria") return criteria();
    if (c_.command == "search") return search();
    if (c_.command == "classify") return classify();
    throw Error(ErrorCode::InvalidParameters, "unknown command " + c_.command);
  }

 private:
  FieldPtr field() const {
    if (c_.m == 0) throw Error(ErrorCode::InvalidParameters, "--m is required");
    if (c_.m > Field::kMaxDegree) throw Error(ErrorCode::FieldTooLarge, "m above " + std::to_string(Field::kMaxDegree));
    if (c_.modulus.empty()) return Field::standard(c_.m);
    return Field::create(c_.m, parse_hex(c_.modulus, "modulus"));
  }

  std::map<std::string, word_t> named() const {
    std::map<std::string, word_t> out;
    for (const auto& s : c_.coefs) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::ParseError, "--coef expects name=hex, got '" + s + "'");
      out[s.substr(0, eq)] = static_cast<word_t>(parse_hex(s.substr(eq + 1), "coefficient"));
    }
    return out;
  }

  PolyFunc function(const FieldPtr& F) const {
    if (c_.poly.empty()) throw Error(ErrorCode::InvalidParameters, "--poly is required");
    return parse_function(F, c_.poly, named());
  }

  Json header(const FieldPtr& F) const {
    Json j;
    j["command"] = c_.sub.empty() ? c_.command : c_.command + " " + c_.sub;
    if (F) {
      j["m"] = F->m();
      j["modulus"] = hex(F->modulus());
    }
    j["seed"] = c_.seed;
    return j;
  }

  void emit(const Json& j) { out_ << j.dump() << "\n"; }

  std::uint64_t budget(std::uint64_t fallback) const {
    const std::uint64_t b = c_.budget.value_or(fallback);
    if (b == 0) throw Error(ErrorCode::InvalidParameters, "--budget must be positive");
    return b;
  }

  int apn_test() {
    const FieldPtr F = field();
    const PolyFunc f = function(F);
    const std::uint64_t q = F->size();
    if (q * q > budget(std::uint64_t{1} << 34)) throw Error(ErrorCode::BudgetExceeded, "q^2 above the budget");
    const DifferentialSpectrum s = differential_spectrum(f);
    const bool apn = s.delta == 2;
    if (fmt_ == Format::Json) {
      Json j = header(F);
      j["poly"] = f.to_string();
      j["delta"] = s.delta;
      Json h = Json::object();
      for (const auto& [k, v] : s.histogram) h[std::to_string(k)] = v;
      j["histogram"] = h;
      j["apn"] = apn;
      emit(j);
    } else {
      out_ << "function " << f.to_string() << " over " << F->describe() << "\n";
      out_ << "delta " << s.delta << "\n";
      for (const auto& [k, v] : s.histogram) out_ << "  " << k << " solutions: " << v << "\n";
      out_ << "apn " << (apn ? "true" : "false") << "\n";
    }
    return apn ? kExitTrue : kExitFalse;
  }

  int sigma() {
    const FieldPtr F = field();
    const PolyFunc f = function(F);
    Json j = header(F);
    j["poly"] = f.to_string();
    if (c_.sub == "build") {
      const SigmaSurface s = build_sigma(f);
      j["d"] = s.d;
      j["phi"] = s.phi.to_string();
      j["phi_projective"] = s.phi_proj.to_string();
      if (fmt_ == Format::Json) emit(j);
      else out_ << s.phi.to_string() << "\n";
      return kExitTrue;
    }
    if (c_.sub == "count") {
      const SigmaSurface s = build_sigma(f);
      CountOptions opts;
      const std::uint64_t b = budget(std::uint64_t{1} << 30);
      opts.max_m = 0;
      while (opts.max_m < 21 && (std::uint64_t{1} << (3 * (opts.max_m + 1))) <= b) ++opts.max_m;
      const PointCount pc = count_points(s, opts);
      const std::uint64_t q = F->size();
      const std::uint64_t bound = 4 * ((s.d - 3) * q + 1);
      j["d"] = s.d;
      j["affine_total"] = pc.affine_total;
      j["affine_on_triple_locus"] = pc.affine_on_triple_locus;
      j["affine_off_locus"] = pc.affine_off_locus;
      j["infinity_points"] = pc.infinity_points;
      j["projective_total"] = pc.projective_total;
      j["apn_bound"] = bound;
      j["within_apn_bound"] = pc.projective_total <= bound;
      if (fmt_ == Format::Json) {
        emit(j);
      } else {
        for (const char* k : {"affine_total", "affine_on_triple_locus", "affine_off_locus", "infinity_points",
                              "projective_total", "apn_bound"}) {
          out_ << k << " " << j[k].get<std::uint64_t>() << "\n";
        }
      }
      return kExitTrue;
    }
    bool holds = false;
    if (c_.sub == "check-lemma41") {
      holds = lemma41_check(f);
      j["holds"] = holds;
    } else if (c_.sub == "check-singular") {
      holds = singular_at_infinity_diagonal(f);
      j["holds"] = holds;
    } else {
      throw Error(ErrorCode::InvalidParameters, "unknown sigma subcommand");
    }
    if (fmt_ == Format::Json) emit(j);
    else out_ << c_.sub << " " << (holds ? "pass" : "fail") << "\n";
    return holds ? kExitTrue : kExitFalse;
  }

  std::pair<unsigned, unsigned> d_range() const {
    const auto colon = c_.d.find(':');
    if (colon == std::string::npos) {
      const auto d = static_cast<unsigned>(parse_u64(c_.d, 10, "--d"));
      return {d, d};
    }
    const auto a = static_cast<unsigned>(parse_u64(c_.d.substr(0, colon), 10, "--d"));
    const auto b = static_cast<unsigned>(parse_u64(c_.d.substr(colon + 1), 10, "--d"));
    if (a > b) throw Error(ErrorCode::InvalidParameters, "empty --d range");
    return {a, b};
  }

  static std::string opt_to_string(const std::optional<unsigned>& v) { return v ? std::to_string(*v) : "n/a"; }

  int bounds() {
    const auto kind = parse_kind(c_.kind);
    if (!kind) throw Error(ErrorCode::ParseError, "--kind must be irreducible or isolated");
    Json j = header(nullptr);
    j["kind"] = to_string(*kind);
    if (c_.sub == "report") {
      const unsigned d = d_range().first;
      if (c_.m == 0) throw Error(ErrorCode::InvalidParameters, "--m is required");
      const BoundReport r = bound_report(d, c_.m);
      j.erase("kind");
      j["d"] = d;
      j["m"] = c_.m;
      j["q"] = r.q.str();
      j["lw_bound"] = {{"rational", r.lw_bound.rational.str()}, {"sqrt_coeff", r.lw_bound.coeff.str()},
                       {"radicand", r.lw_bound.radicand.str()}, {"approx", r.lw_bound.approx()}};
      j["deligne_bound"] = {{"rational", r.deligne_bound.rational.str()}, {"sqrt_coeff", r.deligne_bound.coeff.str()},
                            {"radicand", r.deligne_bound.radicand.str()}, {"approx", r.deligne_bound.approx()}};
      j["threshold"] = r.threshold.str();
      j["excluded_irreducible"] = r.excluded_41;
      j["excluded_isolated"] = r.excluded_42;
      if (fmt_ == Format::Json) {
        emit(j);
      } else {
        out_ << "q " << r.q << "\nlw_bound " << r.lw_bound.to_string() << "\ndeligne_bound " << r.deligne_bound.to_string()
             << "\nthreshold " << r.threshold << "\nexcluded_irreducible " << r.excluded_41 << "\nexcluded_isolated "
             << r.excluded_42 << "\n";
      }
      return kExitTrue;
    }
    if (c_.sub != "mmax") throw Error(ErrorCode::InvalidParameters, "unknown bounds subcommand");

    struct Row {
      unsigned d;
      std::optional<unsigned> expected;
      unsigned m_max;
      std::string form;
      std::array<std::optional<unsigned>, 3> per_form;
      bool flagged;
    };
    std::vector<Row> rows;
    if (c_.d.empty()) {
      for (const MmaxRow& r : mmax_table(*kind).rows) {
        rows.push_back({r.d_max, r.expected, r.m_max, r.form ? to_string(*r.form) : "unmatched", r.per_form, r.flagged()});
      }
    } else {
      const auto [a, b] = d_range();
      for (unsigned d = a; d <= b; ++d) {
        Row row{d, std::nullopt, 0, "exact", {}, false};
        const BoundForm forms[] = {BoundForm::Exact, BoundForm::Polynomial, BoundForm::QuarterPower};
        for (int i = 0; i < 3; ++i) row.per_form[i] = m_max(*kind, forms[i], d);
        row.m_max = *row.per_form[0];
        rows.push_back(row);
      }
    }

    if (fmt_ == Format::Csv) {
      out_ << "d_max,m_max,form\n";
      for (const auto& r : rows) out_ << r.d << "," << r.m_max << "," << r.form << "\n";
    } else if (fmt_ == Format::Json) {
      Json arr = Json::array();
      for (const auto& r : rows) {
        Json o;
        o["d_max"] = r.d;
        o["m_max"] = r.m_max;
        o["form"] = r.form;
        o["expected"] = r.expected ? Json(*r.expected) : Json(nullptr);
        o["exact"] = r.per_form[0] ? Json(*r.per_form[0]) : Json(nullptr);
        o["polynomial"] = r.per_form[1] ? Json(*r.per_form[1]) : Json(nullptr);
        o["quarter_power"] = r.per_form[2] ? Json(*r.per_form[2]) : Json(nullptr);
        o["flagged"] = r.flagged;
        arr.push_back(o);
      }
      j["rows"] = arr;
      emit(j);
    } else {
      out_ << "kind " << to_string(*kind) << "\n";
      out_ << "d_max  m_max  form          exact  polynomial  quarter-power  expected\n";
      for (const auto& r : rows) {
        out_ << r.d << "\t" << r.m_max << "\t" << r.form << "\t" << opt_to_string(r.per_form[0]) << "\t"
             << opt_to_string(r.per_form[1]) << "\t" << opt_to_string(r.per_form[2]) << "\t"
             << (r.expected ? std::to_string(*r.expected) : "-") << (r.flagged ? "\t[flagged]" : "") << "\n";
      }
      if (*kind == MmaxKind::IsolatedSingularities) {
        out_ << "note: a separate statement gives m <= 13 for d = 9; the exact inequality gives "
             << opt_to_string(m_max(*kind, BoundForm::Exact, 9)) << "\n";
      }
    }
    return kExitTrue;
  }

  static Json verdict_json(const CriterionVerdict& v) {
    Json j;
    j["status"] = to_string(v.status);
    j["rule"] = v.rule;
    j["detail"] = v.detail;
    Json f = Json::array();
    for (const auto& w : v.witness_factors) f.push_back(w.to_string());
    j["witness_factors"] = f;
    Json p = Json::array();
    for (const auto& w : v.witness_points) p.push_back(w.to_string());
    j["witness_points"] = p;
    return j;
  }

  void verdict_text(const std::string& name, const CriterionVerdict& v) {
    out_ << name << " " << to_string(v.status) << " (" << v.rule << ")";
    if (!v.detail.empty()) out_ << ": " << v.detail;
    out_ << "\n";
    for (const auto& w : v.witness_factors) out_ << "  factor " << w.to_string() << "\n";
    for (const auto& w : v.witness_points) out_ << "  point " << w.to_string() << "\n";
  }

  int criteria() {
    if (c_.d.empty()) throw Error(ErrorCode::InvalidParameters, "--d is required");
    const auto [a, b] = d_range();
    if (a != b) throw Error(ErrorCode::InvalidParameters, "criteria takes a single --d");
    const unsigned d = a;
    std::vector<std::pair<std::string, CriterionVerdict>> vs{{"jmw", jmw_irreducible(d)}, {"jw", jw_smooth(d)}};
    if (c_.r) {
      vs.emplace_back("binomial", binomial_criterion(d, *c_.r));
      vs.emplace_back("voloch", voloch_criterion(d, *c_.r));
    }
    std::optional<std::vector<ProjectivePoint>> sing;
    if (c_.singular) sing = curve_singular_points(infinity_curve(d));
    if (fmt_ == Format::Json) {
      Json j = header(nullptr);
      j["d"] = d;
      if (c_.r) j["r"] = *c_.r;
      for (const auto& [name, v] : vs) j[name] = verdict_json(v);
      if (sing) {
        Json p = Json::array();
        for (const auto& pt : *sing) p.push_back(pt.to_string());
        j["singular_points_at_infinity"] = p;
      }
      emit(j);
    } else {
      for (const auto& [name, v] : vs) verdict_text(name, v);
      if (sing) {
        out_ << "singular points at infinity: " << sing->size() << "\n";
        for (const auto& pt : *sing) out_ << "  " << pt.to_string() << "\n";
      }
    }
    return kExitTrue;
  }

  int search() {
    const FieldPtr F = field();
    SearchJob job;
    job.field = F;
    job.family = c_.family;
    for (char ch : c_.nonzero) {
      if (ch >= 'A' && ch <= 'Z') job.nonzero.push_back(ch);
      else if (ch != ',' && ch != ' ') throw Error(ErrorCode::ParseError, "--nonzero expects placeholders like A,B");
    }
    job.budget = budget(kDefaultSearchBudget);
    job.workers = c_.workers;
    if (!c_.resume.empty()) {
      std::ifstream in(c_.resume);
      if (!in) throw Error(ErrorCode::CorruptCheckpoint, "cannot read " + c_.resume);
      std::stringstream ss;
      ss << in.rdbuf();
      job = checkpoint_resume(job, ss.str());
    }
    const SearchResult r = scan(job);
    if (fmt_ == Format::Text) {
      for (const auto& h : r.hits) out_ << "hit " << h.index << "  " << h.function.to_string() << "  fp " << h.digest << "\n";
    } else {
      for (const auto& h : r.hits) out_ << hit_to_jsonl(h, r.placeholders) << "\n";
    }
    if (!c_.checkpoint.empty()) {
      std::ofstream o(c_.checkpoint);
      o << checkpoint_save(r);
    }
    Json s = header(F);
    s["family"] = c_.family;
    s["placeholders"] = std::string(r.placeholders.begin(), r.placeholders.end());
    s["fixed_to_one"] = std::string(r.fixed_to_one.begin(), r.fixed_to_one.end());
    s["hits"] = r.hits.size();
    s["total"] = r.total;
    s["start"] = job.start;
    s["scanned"] = r.scanned;
    s["aborted_early"] = r.aborted_early;
    s["skipped"] = r.skipped;
    s["cursor"] = r.cursor;
    s["family_hash"] = hex(r.family_hash);
    s["budget_exceeded"] = r.budget_exceeded;
    s["elapsed_seconds"] = r.elapsed_seconds;
    if (fmt_ == Format::Text) {
      out_ << "hits " << r.hits.size() << "  scanned " << r.scanned << "/" << r.total << "  cursor " << r.cursor
           << (r.budget_exceeded ? "  [budget exceeded]" : "") << "\n";
    } else {
      emit(Json{{"summary", s}});
    }
    return r.budget_exceeded ? kExitBudget : kExitTrue;
  }

  int classify() {
    const unsigned d = d_range().first;
    if (c_.m == 0) throw Error(ErrorCode::InvalidParameters, "--m is required");
    const std::uint64_t b = budget(kDefaultSearchBudget);
    ClassificationReport rep;
    if (d == 6) rep = classify_degree6(c_.m, b, c_.workers);
    else if (d == 7) rep = classify_degree7(c_.m, b, c_.workers);
    else if (d == 9) rep = classify_degree9(c_.m, b, c_.workers);
    else throw Error(ErrorCode::InvalidParameters, "classify supports d = 6, 7, 9");

    if (fmt_ == Format::Json) {
      Json j = header(Field::standard(c_.m));
      j["d"] = d;
      Json refs = Json::array();
      for (const auto& ref : rep.references) refs.push_back({{"label", ref.label}, {"apn", ref.apn}, {"fingerprint", ref.digest}});
      j["references"] = refs;
      Json scans = Json::array();
      for (std::size_t i = 0; i < rep.scans.size(); ++i) {
        const auto& s = rep.scans[i];
        Json o;
        o["family"] = s.label;
        o["total"] = s.result.total;
        o["scanned"] = s.result.scanned;
        Json hits = Json::array();
        for (std::size_t k = 0; k < s.result.hits.size(); ++k) {
          Json h = Json::parse(hit_to_jsonl(s.result.hits[k], s.result.placeholders));
          h["matches"] = rep.matches[i][k];
          hits.push_back(h);
        }
        o["hits"] = hits;
        scans.push_back(o);
      }
      j["scans"] = scans;
      j["notes"] = rep.notes;
      j["caveat"] = rep.caveat;
      emit(j);
    } else {
      out_ << "degree " << d << " over F_2^" << c_.m << "\n";
      for (const auto& ref : rep.references) out_ << "reference " << ref.label << (ref.apn ? " (APN)" : " (not APN)") << " fp " << ref.digest << "\n";
      for (std::size_t i = 0; i < rep.scans.size(); ++i) {
        const auto& s = rep.scans[i];
        out_ << "family " << s.label << ": " << s.result.hits.size() << " hits of " << s.result.total << "\n";
        for (std::size_t k = 0; k < s.result.hits.size(); ++k) {
          out_ << "  " << s.result.hits[k].function.to_string() << "  fp " << s.result.hits[k].digest;
          for (const auto& lab : rep.matches[i][k]) out_ << "  ~" << lab;
          out_ << "\n";
        }
      }
      for (const auto& n : rep.notes) out_ << "note: " << n << "\n";
      out_ << "caveat: " << rep.caveat << "\n";
    }
    return kExitTrue;
  }

  const RunConfig& c_;
  std::ostream& out_;
  Format fmt_ = Format::Text;
};

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  sub->add_option("--seed", c.seed, "Seed recorded in reports");
  sub->add_option("--workers", c.workers, "Worker threads (0 = default)");
  sub->add_option("--budget", c.budget, "Work cap in elementary operations")->check(CLI::PositiveNumber);
}

void add_field(CLI::App* sub, RunConfig& c) {
  sub->add_option("--m", c.m, "Field degree")->check(CLI::Range(1u, Field::kMaxDegree));
  sub->add_option("--modulus", c.modulus, "Defining polynomial as hex bit mask");
}

void add_poly(CLI::App* sub, RunConfig& c) {
  sub->add_option("--poly", c.poly, "Polynomial, e.g. \"x^9 + 0x3*x^6 + x^3\"")->required();
  sub->add_option("--coef", c.coefs, "Named coefficient name=hex");
}

void print_error(std::ostream& err, const std::string& code, const std::string& msg, const RunConfig& c) {
  if (c.format == "json") {
    err << Json{{"error", code}, {"message", msg}}.dump() << "\n";
  } else {
    err << "error: " << msg << "\n";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"APN polynomial analysis"};
  app.name("apn_tool");
  app.require_subcommand(1, 1);

  auto* apn_test = app.add_subcommand("apn-test", "Differential spectrum and APN predicate");
  add_field(apn_test, c);
  add_poly(apn_test, c);
  add_common(apn_test, c);

  auto* sigma = app.add_subcommand("sigma", "Quotient surface of a function");
  sigma->require_subcommand(1, 1);
  for (const char* name : {"build", "count", "check-lemma41", "check-singular"}) {
    auto* s = sigma->add_subcommand(name);
    add_field(s, c);
    add_poly(s, c);
    add_common(s, c);
  }

  auto* bounds = app.add_subcommand("bounds", "Exclusion bounds");
  bounds->require_subcommand(1, 1);
  auto* mmax = bounds->add_subcommand("mmax", "Largest field not excluded, per degree");
  mmax->add_option("--kind", c.kind, "irreducible or isolated");
  mmax->add_option("--d", c.d, "Degree or range a:b (default: the reference rows)");
  add_common(mmax, c);
  auto* report = bounds->add_subcommand("report", "Bound terms at one (d, m)");
  report->add_option("--d", c.d)->required();
  report->add_option("--m", c.m)->required();
  add_common(report, c);

  auto* criteria = app.add_subcommand("criteria", "Geometric criteria for a degree");
  criteria->add_option("--d", c.d)->required();
  criteria->add_option("--r", c.r, "Second exponent for the binomial criteria");
  criteria->add_flag("--singular", c.singular, "Also list singular points of the curve at infinity");
  add_common(criteria, c);

  auto* search = app.add_subcommand("search", "Exhaustive APN scan of a family");
  add_field(search, c);
  search->add_option("--family", c.family, "Family with placeholders A..Z")->required();
  search->add_option("--nonzero", c.nonzero, "Placeholders restricted to nonzero values, e.g. A,B");
  search->add_option("--checkpoint", c.checkpoint, "Write a checkpoint file after the run");
  search->add_option("--resume", c.resume, "Resume from a checkpoint file");
  add_common(search, c);

  auto* classify = app.add_subcommand("classify", "Small-degree classification scans");
  classify->add_option("--d", c.d, "6, 7 or 9")->required();
  add_field(classify, c);
  add_common(classify, c);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitTrue;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitTrue;
  } catch (const CLI::ParseError& e) {
    print_error(err, "UsageError", e.what(), c);
    return kExitUsage;
  }

  for (CLI::App* top : app.get_subcommands()) {
    c.command = top->get_name();
    for (CLI::App* s : top->get_subcommands()) c.sub = s->get_name();
  }

  try {
    return Runner(c, out).run();
  } catch (const Error& e) {
    print_error(err, to_string(e.code()), e.what(), c);
    if (e.code() == ErrorCode::BudgetExceeded) return kExitBudget;
    return kExitUsage;
  } catch (const std::exception& e) {
    print_error(err, "InternalError", e.what(), c);
    return kExitUsage;
  }
}

}  // namespace apn
