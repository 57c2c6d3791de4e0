#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>

#include "rpv/error.hpp"
#include "rpv/galois.hpp"
#include "rpv/gradient.hpp"
#include "rpv/sysio.hpp"

namespace rpv::cli {

namespace {

using json = nlohmann::json;

struct Options {
  bool json = false;
  std::string vars;
  std::string fixtures;
  long sqrt_tag = 0;
};

/// Thrown for bad input files; carries the exit code 2 path.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Report {
  Report() = default;
  Report(std::string c, std::vector<std::string> in) : command(std::move(c)), inputs(std::move(in)) {}

  std::string command;
  std::vector<std::string> inputs;
  std::string verdict;
  int exit_code = kAffirmative;
  json details = json::object();
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

/// Compares "t2" < "t10" by splitting off a trailing integer.
bool natural_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& s) {
    std::size_t i = s.find_last_not_of("0123456789") + 1;
    std::string digits = s.substr(i);
    return std::make_tuple(s.substr(0, i), digits.size(), digits);
  };
  return split(a) < split(b);
}

class Session {
 public:
  Session(const Options& opt, std::istream& in) : opt_(opt), in_(in) {}

  std::string read(const std::string& path) {
    if (path == "-") {
      if (stdin_used_) throw InputError("standard input can only be read once");
      stdin_used_ = true;
      std::ostringstream ss;
      ss << in_.rdbuf();
      return ss.str();
    }
    std::filesystem::path p(path);
    if (!std::filesystem::exists(p) && !opt_.fixtures.empty() && p.is_relative()) {
      auto alt = std::filesystem::path(opt_.fixtures) / p;
      if (std::filesystem::exists(alt)) p = alt;
    }
    std::ifstream f(p, std::ios::binary);
    if (!f) throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  template <class F>
  auto parsed(const std::string& path, F&& parse) {
    std::string text = read(path);
    try {
      return parse(text);
    } catch (const ParseError& e) {
      throw InputError(path + ":" + e.what());
    } catch (const DimensionMismatch& e) {
      throw InputError(path + ": " + e.what());
    }
  }

  LinSystem system(const std::string& path) {
    LinSystem s = parsed(path, [](const std::string& t) { return parse_system(t); });
    if (opt_.vars.empty()) return s;
    ContextPtr ctx = s.context()->reordered(split_list(opt_.vars));
    std::vector<RatMatrix> mats;
    for (const auto& a : s.matrices()) mats.push_back(in_context(a, ctx));
    return LinSystem(ctx, s.rank(), std::move(mats));
  }

  Tower tower(const std::string& path) {
    return parsed(path, [](const std::string& t) { return parse_tower(t); });
  }

  RatMatrix matrix(const std::string& path, const ContextPtr& ctx) {
    return parsed(path, [&](const std::string& t) { return parse_matrix(t, ctx); });
  }

  ContextPtr expression_context(const std::vector<std::string>& texts) {
    std::vector<std::string> names = split_list(opt_.vars);
    if (names.empty()) {
      // Every identifier in the expressions, in natural order (t1 before t2 before t10).
      for (const auto& t : texts) {
        std::string cur;
        auto flush = [&] {
          if (!cur.empty() && valid_identifier(cur) &&
              std::find(names.begin(), names.end(), cur) == names.end())
            names.push_back(cur);
          cur.clear();
        };
        for (char c : t) {
          if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            if (cur.empty() && std::isdigit(static_cast<unsigned char>(c))) continue;
            cur += c;
          } else {
            flush();
          }
        }
        flush();
      }
      std::sort(names.begin(), names.end(), natural_less);
    }
    return DiffContext::partial(names, opt_.sqrt_tag);
  }

 private:
  const Options& opt_;
  std::istream& in_;
  bool stdin_used_ = false;
};

json matrix_json(const RatMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
    rows.push_back(row);
  }
  return rows;
}

json flags_json(const StepFlags& f) {
  json j;
  j["nonderivative"] = to_string(f.nonderivative);
  j["not_exact"] = to_string(f.not_exact);
  j["irreducible"] = to_string(f.irreducible);
  j["zero_components"] = json::array();
  for (auto k : f.zero_components) j["zero_components"].push_back(k + 1);
  j["inherited"] = f.inherited;
  return j;
}

json galois_json(const GaloisClass& g) {
  json j;
  j["descriptor"] = g.render();
  j["solvable"] = g.solvable();
  j["real_split"] = g.real_split();
  j["assumptions"] = g.all_assumptions();
  return j;
}

Report cmd_check(Session& s, const std::string& file) {
  Report r{"check", {file}};
  LinSystem sys = s.system(file);
  auto v = check_integrability(sys);
  r.details["rank"] = sys.rank();
  r.details["derivations"] = sys.derivation_count();
  if (v.integrable) {
    r.verdict = "integrable";
  } else {
    r.verdict = "not integrable";
    r.exit_code = kNegative;
    r.details["pair"] = {v.i + 1, v.j + 1};
    r.details["residual"] = matrix_json(*v.residual);
  }
  return r;
}

Report cmd_reduce(Session& s, const std::string& file, const std::string& u) {
  Report r{"reduce", {file}};
  LinSystem sys = s.system(file);
  ReducedSystem red = kolchin_reduce(sys, split_list(u));
  r.verdict = "reduced";
  r.details["system"] = serialize(red.system);
  r.details["a_d"] = matrix_json(red.a_d());
  return r;
}

Report cmd_verify(Session& s, const std::string& sf, const std::string& tf, const std::string& mf) {
  Report r{"verify", {sf, tf, mf}};
  LinSystem sys = s.system(sf);
  Tower t = s.tower(tf);
  RatMatrix m = s.matrix(mf, t.context());
  Verification v = verify_fundamental(t, sys, m);
  r.verdict = v.ok ? "fundamental" : "not fundamental";
  r.exit_code = v.ok ? kAffirmative : kNegative;
  r.details["det"] = v.det ? v.det->to_string() : "";
  r.details["det_nonzero"] = v.det_nonzero;
  json fails = json::array();
  for (const auto& f : v.failures)
    fails.push_back({{"derivation", f.derivation + 1},
                     {"row", f.row + 1},
                     {"col", f.col + 1},
                     {"lhs", f.lhs},
                     {"rhs", f.rhs}});
  r.details["failures"] = fails;
  r.details["new_constants"] = v.new_constants;
  return r;
}

Report cmd_solve(Session& s, const std::string& file) {
  Report r{"solve-triangular", {file}};
  LinSystem sys = s.system(file);
  try {
    TriangularSolution sol = solve_triangular(sys);
    Verification v = verify_fundamental(sol.tower, sys, sol.fundamental);
    r.verdict = v.ok ? "solved" : "verification failed";
    r.exit_code = v.ok ? kAffirmative : kNegative;
    r.details["tower"] = serialize(sol.tower);
    r.details["matrix"] = matrix_json(sol.fundamental);
    r.details["notes"] = sol.notes;
    r.details["det"] = v.det->to_string();
    r.details["certification"] = to_string(certify_tower(sol.tower).verdict);
  } catch (const NotTriangular& e) {
    r.verdict = "not triangular";
    r.exit_code = kNegative;
    r.details["reason"] = e.what();
  } catch (const NotIntegrable& e) {
    r.verdict = "not integrable";
    r.exit_code = kNegative;
    r.details["reason"] = e.what();
  }
  return r;
}

Report cmd_certify(Session& s, const std::string& file) {
  Report r{"certify-tower", {file}};
  Tower t = s.tower(file);
  CertificationReport c = certify_tower(t);
  r.verdict = to_string(c.verdict);
  r.exit_code = c.verdict == Certification::NotCertified ? kNegative : kAffirmative;
  if (!c.reason.empty()) r.details["reason"] = c.reason;
  json steps = json::array();
  for (const auto& st : c.steps) {
    json j;
    j["index"] = st.index + 1;
    j["kind"] = to_string(st.kind);
    j["names"] = st.names;
    j["flags"] = flags_json(st.flags);
    j["note"] = st.note;
    steps.push_back(j);
  }
  r.details["steps"] = steps;
  return r;
}

Report cmd_classify(Session& s, const std::string& file) {
  Report r{"classify", {file}};
  LinSystem sys = s.system(file);
  try {
    GaloisClass g = classify(sys);
    Verdict v = liouvillian_verdict(g);
    r.verdict = to_string(v);
    r.exit_code = v == Verdict::GeneralisedLiouvillian ? kAffirmative : kNegative;
    r.details["group"] = galois_json(g);
  } catch (const NotIntegrable& e) {
    r.verdict = "not integrable";
    r.exit_code = kNegative;
    r.details["reason"] = e.what();
  }
  return r;
}

Rat parse_rational(const std::string& text) {
  ContextPtr none = DiffContext::partial({});
  RatFunc v = parse_expr(text, none);
  auto c = v.constant_value();
  if (!c || !c->is_rational()) throw InputError("expected a rational number, got '" + text + "'");
  return c->a();
}

Report cmd_euler(const std::string& c_text) {
  Report r{"euler", {c_text}};
  Rat c;
  try {
    c = parse_rational(c_text);
  } catch (const ParseError& e) {
    throw InputError("argument:" + std::string(e.what()));
  }
  EulerClass e = classify_euler(c);
  r.verdict = e.group.render();
  r.details["c"] = to_string(c);
  r.details["discriminant"] = to_string(e.discriminant);
  r.details["group"] = galois_json(e.group);
  if (e.roots) {
    r.details["roots"] = {e.roots->first.to_string(), e.roots->second.to_string()};
    r.details["root_sum"] = (e.roots->first + e.roots->second).to_string();
    r.details["root_product"] = (e.roots->first * e.roots->second).to_string();
  }
  r.details["solutions"] = e.solutions;
  if (e.relation) r.details["relation"] = *e.relation;
  return r;
}

Report cmd_order(Session& s, const std::string& f_text, const std::string& g_text) {
  Report r{"order-cmp", {f_text, g_text}};
  ContextPtr ctx = s.expression_context({f_text, g_text});
  RatFunc f(ctx);
  RatFunc g(ctx);
  try {
    f = parse_expr(f_text, ctx);
    g = parse_expr(g_text, ctx);
  } catch (const ParseError& e) {
    throw InputError("argument:" + std::string(e.what()));
  }
  int sg = sign_infinitesimal(f - g);
  r.verdict = sg < 0 ? "less" : sg > 0 ? "greater" : "equal";
  r.details["sign"] = sg;
  r.details["vars"] = ctx->names();
  r.details["relation"] = f.to_string() + (sg < 0 ? " < " : sg > 0 ? " > " : " = ") + g.to_string();
  return r;
}

Report cmd_gradient(long lambda, long mu, const std::string& value, const std::vector<double>& xs) {
  Report r{"gradient", {std::to_string(lambda), std::to_string(mu)}};
  GradientPotential p(lambda, mu);
  LinSystem sys = gradient_system(p);
  RatFunc i = first_integral(p);
  bool ok = certify_first_integral(p, i);
  r.verdict = ok ? "certified" : "not certified";
  r.exit_code = ok ? kAffirmative : kNegative;
  r.details["system"] = matrix_json(sys.matrix(0));
  r.details["first_integral"] = i.to_string();
  Rat v = parse_rational(value);
  LevelCurve lc = level_curve(p, v);
  r.details["level_value"] = to_string(v);
  r.details["level_curve"] = lc.equation;
  r.details["cusp"] = lc.cusp;
  json table = json::array();
  for (auto [x, k] : curvature_samples(xs)) table.push_back({x, k});
  r.details["curvature_approx"] = table;
  return r;
}

Report cmd_parse(Session& s, const std::string& file) {
  Report r{"parse", {file}};
  SourceDocument doc = make_document(s.read(file));
  r.details["kind"] = to_string(doc.kind);
  try {
    switch (doc.kind) {
      case DocumentKind::System:
        r.details["normalized"] = serialize(parse_system(doc.text));
        break;
      case DocumentKind::Tower:
        r.details["normalized"] = serialize(parse_tower(doc.text));
        break;
      case DocumentKind::Matrix: {
        ContextPtr ctx = s.expression_context({doc.text});
        r.details["normalized"] = serialize(parse_matrix(doc.text, ctx));
        break;
      }
      case DocumentKind::Expression: {
        ContextPtr ctx = s.expression_context({doc.text});
        r.details["normalized"] = parse_expr(doc.text, ctx).to_string();
        break;
      }
    }
  } catch (const ParseError& e) {
    throw InputError(file + ":" + e.what());
  }
  r.verdict = "ok";
  return r;
}

void print_value(std::ostream& out, const std::string& key, const json& v, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find('\n') != std::string::npos) {
      out << pad << key << ":\n";
      std::istringstream ss(s);
      for (std::string line; std::getline(ss, line);) out << pad << "  " << line << "\n";
    } else {
      out << pad << key << ": " << s << "\n";
    }
  } else if (v.is_object()) {
    out << pad << key << ":\n";
    for (const auto& [k, x] : v.items()) print_value(out, k, x, indent + 2);
  } else if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array())) {
    out << pad << key << ":\n";
    for (const auto& x : v) {
      if (x.is_object()) {
        out << pad << "  -\n";
        for (const auto& [k, y] : x.items()) print_value(out, k, y, indent + 4);
      } else {
        out << pad << "  " << x.dump() << "\n";
      }
    }
  } else {
    out << pad << key << ": " << v.dump() << "\n";
  }
}

void emit(const Report& r, const Options& opt, std::ostream& out) {
  if (opt.json) {
    json j;
    j["command"] = r.command;
    j["inputs"] = r.inputs;
    j["verdict"] = r.verdict;
    j["exit_code"] = r.exit_code;
    j["details"] = r.details;
    out << j.dump(2) << "\n";
    return;
  }
  out << r.command << ": " << r.verdict << "\n";
  for (const auto& [k, v] : r.details.items()) print_value(out, k, v, 2);
}

int fail_input(const std::string& command, const std::string& message, const Options& opt,
               std::ostream& out, std::ostream& err) {
  err << "error: " << message << "\n";
  if (opt.json) {
    json j;
    j["command"] = command;
    j["error"] = message;
    j["exit_code"] = static_cast<int>(kUsage);
    out << j.dump(2) << "\n";
  }
  return kUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Exact tools for integrable linear partial differential systems", "rpv"};
  app.fallthrough();
  app.require_subcommand(1);
  Options opt;
  app.add_flag("--json", opt.json, "machine-readable report");
  app.add_option("--vars", opt.vars, "comma-separated variable order");
  app.add_option("--fixtures", opt.fixtures, "directory searched for relative input paths");
  app.add_option("--sqrt", opt.sqrt_tag, "scalar field tag d for expression arguments");

  std::string file;
  std::string file2;
  std::string file3;
  std::string u_names;
  std::string c_text;
  std::string f_text;
  std::string g_text;
  long lambda = 0;
  long mu = 0;
  std::string value = "1";
  std::vector<double> xs = {1e-2, 1e-4, 1e-6, 1e-8};

  auto* check = app.add_subcommand("check", "integrability conditions");
  check->add_option("system", file, "system file or -")->required();
  auto* reduce = app.add_subcommand("reduce", "Kolchin reduction to one derivation");
  reduce->add_option("system", file, "system file or -")->required();
  reduce->add_option("--u", u_names, "indeterminate names");
  auto* verify = app.add_subcommand("verify", "check a fundamental matrix over a tower");
  verify->add_option("system", file, "system file")->required();
  verify->add_option("tower", file2, "tower file")->required();
  verify->add_option("matrix", file3, "matrix file")->required();
  auto* solve = app.add_subcommand("solve-triangular", "quadrature solution of a triangular system");
  solve->add_option("system", file, "system file or -")->required();
  auto* certify = app.add_subcommand("certify-tower", "Liouvillian certification of a tower");
  certify->add_option("tower", file, "tower file or -")->required();
  auto* cls = app.add_subcommand("classify", "Galois group descriptor and verdict");
  cls->add_option("system", file, "system file or -")->required();
  auto* euler = app.add_subcommand("euler", "Galois data of y'' = (c/x^2) y");
  euler->add_option("c", c_text, "rational coefficient")->required();
  auto* order = app.add_subcommand("order-cmp", "compare two elements in the infinitesimal order");
  order->add_option("f", f_text, "expression")->required();
  order->add_option("g", g_text, "expression")->required();
  auto* grad = app.add_subcommand("gradient", "gradient system of lambda x^2 + mu y^2");
  grad->add_option("lambda", lambda, "non-zero integer")->required();
  grad->add_option("mu", mu, "non-zero integer")->required();
  grad->add_option("--value", value, "level value");
  grad->add_option("--samples", xs, "curvature sample points");
  auto* parse = app.add_subcommand("parse", "syntax check");
  parse->add_option("file", file, "document or -")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kAffirmative;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  std::string command = app.get_subcommands().front()->get_name();
  Session session(opt, in);
  try {
    Report r;
    if (*check) r = cmd_check(session, file);
    else if (*reduce) r = cmd_reduce(session, file, u_names);
    else if (*verify) r = cmd_verify(session, file, file2, file3);
    else if (*solve) r = cmd_solve(session, file);
    else if (*certify) r = cmd_certify(session, file);
    else if (*cls) r = cmd_classify(session, file);
    else if (*euler) r = cmd_euler(c_text);
    else if (*order) r = cmd_order(session, f_text, g_text);
    else if (*grad) r = cmd_gradient(lambda, mu, value, xs);
    else r = cmd_parse(session, file);
    emit(r, opt, out);
    return r.exit_code;
  } catch (const InputError& e) {
    return fail_input(command, e.what(), opt, out, err);
  } catch (const ParseError& e) {
    return fail_input(command, e.what(), opt, out, err);
  } catch (const Error& e) {
    return fail_input(command, e.what(), opt, out, err);
  } catch (const std::exception& e) {
    return fail_input(command, std::string("internal: ") + e.what(), opt, out, err);
  }
}

}  // namespace rpv::cli
