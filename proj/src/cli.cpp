#include "lieschatten/cli.hpp"

#include "lieschatten/error.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lieschatten {

namespace {

using Json = nlohmann::ordered_json;

double parse_real(const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return number(v);
}

Json json_complex(Complex z) { return Json::array({z.real(), z.imag()}); }

Json json_array(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(json_number(x));
  return a;
}

Json json_array(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) { row(header); }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) text_ += ',';
      text_ += csv_field(fields[i]);
    }
    text_ += "\r\n";
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

Json config_json(const RunConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["group"] = cfg.group;
  if (cfg.command != "dual") j["family"] = cfg.family;
  j["alpha"] = json_number(cfg.alpha);
  j["r"] = json_number(cfg.r);
  j["cutoff"] = json_number(cfg.cutoff);
  j["cutoffs"] = json_array(cfg.cutoffs);
  j["alphas"] = json_array(cfg.alphas);
  j["rs"] = json_array(cfg.rs);
  j["format"] = cfg.format == OutputFormat::Json ? "json" : "csv";
  j["output"] = cfg.output;
  return j;
}

Json document(const RunConfig& cfg) {
  Json j;
  j["tool"] = "lieschatten";
  j["version"] = kVersion;
  j["config"] = config_json(cfg);
  return j;
}

Json rule_certificate(const QuadratureRule& rule) {
  Json j;
  j["group"] = rule.group.name();
  j["bandlimit"] = rule.bandlimit;
  j["nodes"] = rule.size();
  return j;
}

Json symbol_certificate(const InvariantSymbol& sym) {
  Json j;
  j["cutoff"] = sym.cutoff;
  j["classes"] = sym.duals.size();
  j["basis_size"] = basis_size(sym.duals);
  j["max_band"] = max_band(sym.duals);
  return j;
}

void require_cutoff(double c) {
  if (!(c >= 1) || !std::isfinite(c)) throw std::invalid_argument("--cutoff must be a finite value >= 1");
}

void require_ladder(const std::vector<double>& cutoffs) {
  if (cutoffs.empty()) throw std::invalid_argument("--cutoffs must not be empty");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    require_cutoff(cutoffs[i]);
    if (i && !(cutoffs[i] > cutoffs[i - 1])) throw std::invalid_argument("--cutoffs must be strictly increasing");
  }
}

std::string cmd_dual(const RunConfig& cfg) {
  const GroupId g = GroupId::parse(cfg.group);
  require_cutoff(cfg.cutoff);
  const std::vector<IrrepInfo> duals = enumerate_dual(g, cfg.cutoff);
  if (cfg.format == OutputFormat::Csv) {
    Csv csv({"label", "dim", "casimir", "weight"});
    for (const IrrepInfo& i : duals)
      csv.row({i.label.to_string(), std::to_string(i.dim), number(i.casimir), number(i.weight)});
    return csv.str();
  }
  Json doc = document(cfg);
  Json rows = Json::array();
  for (const IrrepInfo& i : duals)
    rows.push_back({{"label", i.label.to_string()}, {"dim", i.dim}, {"casimir", i.casimir}, {"weight", i.weight}});
  doc["result"] = {{"rows", rows}};
  doc["certificates"] = {{"cutoff", cfg.cutoff}, {"classes", duals.size()}, {"basis_size", basis_size(duals)}};
  return doc.dump(2) + "\n";
}

std::string cmd_schatten(const RunConfig& cfg) {
  require_ladder(cfg.cutoffs);
  if (!(cfg.r > 0)) throw std::invalid_argument("--r must be positive");
  const InvariantSymbol sym = config_symbol(cfg, cfg.cutoffs.back());
  const SchattenReport rep = schatten_report(sym, cfg.r, cfg.cutoffs);
  const double slope = growth_exponent(rep.cutoffs, rep.partial_sums);
  if (cfg.format == OutputFormat::Csv) {
    Csv csv({"cutoff", "partial_sum", "verdict"});
    for (std::size_t i = 0; i < rep.cutoffs.size(); ++i)
      csv.row({number(rep.cutoffs[i]), number(rep.partial_sums[i]), to_string(rep.verdict)});
    return csv.str();
  }
  Json doc = document(cfg);
  doc["result"] = {{"r", json_number(rep.r)},
                   {"cutoffs", json_array(rep.cutoffs)},
                   {"partial_sums", json_array(rep.partial_sums)},
                   {"verdict", to_string(rep.verdict)},
                   {"growth_exponent", json_number(slope)}};
  doc["certificates"] = {{"symbol", symbol_certificate(sym)}};
  return doc.dump(2) + "\n";
}

TruncatedOperator guarded_oracle(const InvariantSymbol& sym) {
  const std::size_t n = basis_size(sym.duals);
  if (n > kOracleMaxBasis) {
    throw NumericalGuardError("oracle refused: " + std::to_string(n) + " basis functions exceed the limit of " +
                              std::to_string(kOracleMaxBasis));
  }
  return truncate_operator(sym, sym.cutoff);
}

std::string cmd_trace(const RunConfig& cfg) {
  require_cutoff(cfg.cutoff);
  const InvariantSymbol sym = config_symbol(cfg, cfg.cutoff);
  const TruncatedOperator op = guarded_oracle(sym);
  const auto rule = std::make_shared<QuadratureRule>(haar_quadrature(sym.group, max_band(sym.duals)));
  const Complex by_formula = trace_invariant(sym);
  const Complex by_matrix = op.matrix.diagonal().sum();
  Complex by_kernel = 0;
  for (std::size_t i = 0; i < rule->size(); ++i)
    by_kernel += rule->weights[i] * kernel_of_invariant(sym, rule->nodes[i], rule->nodes[i]);
  const double discrepancy =
      std::max({std::abs(by_formula - by_matrix), std::abs(by_formula - by_kernel), std::abs(by_matrix - by_kernel)});

  if (cfg.format == OutputFormat::Csv) {
    Csv csv({"method", "re", "im"});
    csv.row({"formula", number(by_formula.real()), number(by_formula.imag())});
    csv.row({"matrix_diagonal", number(by_matrix.real()), number(by_matrix.imag())});
    csv.row({"kernel_diagonal", number(by_kernel.real()), number(by_kernel.imag())});
    csv.row({"max_discrepancy", number(discrepancy), "0"});
    return csv.str();
  }
  Json doc = document(cfg);
  doc["result"] = {{"trace", json_complex(by_formula)},
                   {"cross_check",
                    {{"formula", json_complex(by_formula)},
                     {"matrix_diagonal", json_complex(by_matrix)},
                     {"kernel_diagonal", json_complex(by_kernel)},
                     {"max_discrepancy", discrepancy}}}};
  doc["certificates"] = {{"symbol", symbol_certificate(sym)}, {"rule", rule_certificate(*rule)}};
  return doc.dump(2) + "\n";
}

std::string cmd_oracle(const RunConfig& cfg) {
  require_cutoff(cfg.cutoff);
  const InvariantSymbol sym = config_symbol(cfg, cfg.cutoff);
  const TruncatedOperator op = guarded_oracle(sym);
  const Eigen::VectorXd from_symbol = singular_values_from_symbol(sym);
  const double deviation = (from_symbol - op.singular_values).cwiseAbs().maxCoeff();
  if (cfg.format == OutputFormat::Csv) {
    Csv csv({"index", "from_symbol", "from_oracle"});
    for (Eigen::Index i = 0; i < from_symbol.size(); ++i)
      csv.row({std::to_string(i), number(from_symbol(i)), number(op.singular_values(i))});
    return csv.str();
  }
  Json doc = document(cfg);
  doc["result"] = {{"from_symbol", json_array(from_symbol)},
                   {"from_oracle", json_array(op.singular_values)},
                   {"max_deviation", deviation},
                   {"svd_residual", op.svd_residual}};
  const QuadratureRule rule = haar_quadrature(sym.group, max_band(sym.duals));
  doc["certificates"] = {{"symbol", symbol_certificate(sym)}, {"rule", rule_certificate(rule)}};
  return doc.dump(2) + "\n";
}

FamilyKind scan_kind(const std::string& family) {
  if (family == "bessel") return FamilyKind::Bessel;
  if (family == "sublaplacian") return FamilyKind::SubLaplacianPower;
  throw std::invalid_argument("scan supports --family bessel or sublaplacian, got '" + family + "'");
}

std::string cmd_scan(const RunConfig& cfg) {
  require_ladder(cfg.cutoffs);
  if (cfg.alphas.empty() || cfg.rs.empty()) throw std::invalid_argument("scan needs --alphas and --rs");
  for (double r : cfg.rs)
    if (!(r > 0)) throw std::invalid_argument("--rs entries must be positive");
  const GroupId g = GroupId::parse(cfg.group);
  const std::vector<ScanRow> rows = threshold_scan(scan_kind(cfg.family), g, cfg.alphas, cfg.rs, cfg.cutoffs);
  if (cfg.format == OutputFormat::Csv) {
    Csv csv({"alpha", "r", "alpha_r", "critical", "verdict", "growth_exponent"});
    for (const ScanRow& row : rows)
      csv.row({number(row.alpha), number(row.r), number(row.product), number(row.critical), to_string(row.verdict),
               number(row.growth_exponent)});
    return csv.str();
  }
  Json doc = document(cfg);
  Json out = Json::array();
  for (const ScanRow& row : rows)
    out.push_back({{"alpha", row.alpha},
                   {"r", json_number(row.r)},
                   {"alpha_r", json_number(row.product)},
                   {"critical", row.critical},
                   {"verdict", to_string(row.verdict)},
                   {"growth_exponent", json_number(row.growth_exponent)},
                   {"partial_sums", json_array(row.report.partial_sums)}});
  doc["result"] = {{"rows", out}};
  doc["certificates"] = {{"cutoffs", json_array(cfg.cutoffs)},
                         {"classes", enumerate_dual(g, cfg.cutoffs.back()).size()}};
  return doc.dump(2) + "\n";
}

}  // namespace

InvariantSymbol config_symbol(const RunConfig& cfg, double cutoff) {
  const GroupId g = GroupId::parse(cfg.group);
  const std::string& f = cfg.family;
  if (f == "bessel") return bessel_symbol(g, cfg.alpha, cutoff);
  if (f == "laplacian") return laplacian_power_symbol(g, cfg.alpha, cutoff);
  if (f == "sublaplacian") return sublaplacian_symbol(g, cfg.alpha, cutoff);
  if (f == "identity") return identity_symbol(g, cutoff);
  if (f == "zero") return zero_symbol(g, cutoff);
  if (f == "carleman") {
    return convolution_symbol(g, [](const std::vector<int>& k) { return Complex(carleman_coefficient(k), 0); },
                              cutoff);
  }
  throw std::invalid_argument("unknown family '" + f + "'");
}

std::string execute(const RunConfig& cfg) {
  if (cfg.command == "dual") return cmd_dual(cfg);
  if (cfg.command == "schatten") return cmd_schatten(cfg);
  if (cfg.command == "trace") return cmd_trace(cfg);
  if (cfg.command == "oracle") return cmd_oracle(cfg);
  if (cfg.command == "scan") return cmd_scan(cfg);
  throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string format = "json", r_text = "2";
  std::vector<std::string> rs_text;

  CLI::App app{"Matrix-symbol calculus and Schatten diagnostics on T^n, SU(2) and SO(3)", "lieschatten"};
  app.set_version_flag("--version", std::string("lieschatten ") + kVersion);
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--group", cfg.group, "t<n>, su2 or so3")->required();
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", cfg.output, "write the result to this file");
  };
  auto add_family = [&](CLI::App* sub) {
    sub->add_option("--family", cfg.family, "bessel, laplacian, sublaplacian, identity, zero or carleman");
    sub->add_option("--alpha", cfg.alpha, "family exponent");
  };

  CLI::App* dual = app.add_subcommand("dual", "list the unitary dual up to a cutoff");
  add_common(dual);
  dual->add_option("--cutoff", cfg.cutoff, "largest <xi>")->required();

  CLI::App* schatten = app.add_subcommand("schatten", "Schatten partial sums and verdict");
  add_common(schatten);
  add_family(schatten);
  schatten->add_option("--r", r_text, "Schatten order (positive or inf)");
  schatten->add_option("--cutoffs", cfg.cutoffs, "increasing cutoff ladder")->delimiter(',');

  CLI::App* trace = app.add_subcommand("trace", "trace by formula, matrix diagonal and kernel diagonal");
  add_common(trace);
  add_family(trace);
  trace->add_option("--cutoff", cfg.cutoff, "largest <xi>")->required();

  CLI::App* oracle = app.add_subcommand("oracle", "singular values from the symbol vs the truncated matrix");
  add_common(oracle);
  add_family(oracle);
  oracle->add_option("--cutoff", cfg.cutoff, "largest <xi>")->required();

  CLI::App* scan = app.add_subcommand("scan", "verdict table over an (alpha, r) grid");
  add_common(scan);
  add_family(scan);
  scan->add_option("--alphas", cfg.alphas, "alpha grid")->delimiter(',')->required();
  scan->add_option("--rs", rs_text, "r grid")->delimiter(',')->required();
  scan->add_option("--cutoffs", cfg.cutoffs, "increasing cutoff ladder")->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    for (CLI::App* sub : {dual, schatten, trace, oracle, scan})
      if (sub->parsed()) cfg.command = sub->get_name();
    cfg.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    cfg.r = parse_real(r_text);
    for (const std::string& t : rs_text) cfg.rs.push_back(parse_real(t));

    const std::string text = execute(cfg);
    if (cfg.output.empty()) {
      out << text;
    } else {
      std::ofstream file(cfg.output, std::ios::binary);
      if (!file) throw std::invalid_argument("cannot open output file '" + cfg.output + "'");
      file << text;
      if (!file) throw std::invalid_argument("failed writing '" + cfg.output + "'");
    }
    return 0;
  } catch (const NumericalGuardError& e) {
    err << "numerical guard: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lieschatten
