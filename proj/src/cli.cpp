#include "pnforms/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "pnforms/bott.hpp"
#include "pnforms/display.hpp"
#include "pnforms/forms.hpp"
#include "pnforms/horace.hpp"
#include "pnforms/maxrank.hpp"
#include "pnforms/parallel.hpp"

namespace pnforms::cli {

using ojson = nlohmann::ordered_json;

std::vector<int> IntRange::values() const {
  std::vector<int> v;
  for (int x = first; x <= last; ++x) v.push_back(x);
  return v;
}

namespace {

int parse_int(const std::string& text, const std::string& option) {
  int v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) throw UsageError(option + ": '" + text + "' is not an integer");
  return v;
}

}  // namespace

IntRange parse_range(const std::string& text, const std::string& option, bool allow_all) {
  if (text == "all") {
    if (!allow_all) throw UsageError(option + ": 'all' is not allowed here");
    return {0, 0, true};
  }
  const auto dots = text.find("..");
  IntRange r;
  if (dots == std::string::npos) {
    r.first = r.last = parse_int(text, option);
  } else {
    r.first = parse_int(text.substr(0, dots), option);
    r.last = parse_int(text.substr(dots + 2), option);
  }
  if (r.last < r.first) throw UsageError(option + ": empty range '" + text + "'");
  return r;
}

namespace {

int single(const std::string& text, const std::string& option) {
  const auto r = parse_range(text, option);
  if (r.first != r.last) throw UsageError(option + " takes a single value here");
  return r.first;
}

// Writes to --out when given, else to out.
void emit(const RunConfig& config, std::ostream& out, const std::string& text) {
  if (config.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + config.out);
  file << text;
}

std::string pad_left(const std::string& s, std::size_t w) { return std::string(w > s.size() ? w - s.size() : 0, ' ') + s; }

ojson integer_json(const mpz_class& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

}  // namespace

int cmd_bott(const RunConfig& config, std::ostream& out, std::ostream&) {
  const auto ns = parse_range(config.n, "--n");
  const auto ps = parse_range(config.p, "--p", true);
  const auto ds = parse_range(config.d, "--d");
  if (ns.first < 0) throw UsageError("--n must be nonnegative");
  std::vector<std::pair<int, std::vector<int>>> grid;
  for (int n : ns.values()) {
    std::vector<int> pv = ps.all ? IntRange{0, n}.values() : ps.values();
    for (int p : pv) {
      if (p < 0 || p > n) throw UsageError("--p " + std::to_string(p) + " is outside 0..n for n = " + std::to_string(n));
    }
    grid.emplace_back(n, std::move(pv));
  }

  std::ostringstream os;
  if (config.format == Format::json) {
    ojson all = ojson::array();
    for (const auto& [n, pv] : grid) {
      for (int p : pv) {
        for (int d : ds.values()) {
          ojson dims = ojson::array();
          for (const auto& v : bott::cohomology(n, p, d).dims) dims.push_back(integer_json(v));
          all.push_back({{"n", n}, {"p", p}, {"d", d}, {"dims", dims}});
        }
      }
    }
    os << all.dump(2) << '\n';
  } else if (config.format == Format::csv) {
    os << "n,p,d,i,dim\n";
    for (const auto& [n, pv] : grid) {
      for (int p : pv) {
        for (int d : ds.values()) {
          const auto c = bott::cohomology(n, p, d);
          for (int i = 0; i <= n; ++i) os << n << ',' << p << ',' << d << ',' << i << ',' << c.dims[i].get_str() << '\n';
        }
      }
    }
  } else {
    for (const auto& [n, pv] : grid) {
      std::vector<std::vector<std::string>> rows;
      std::vector<std::string> header = {"p", "i"};
      for (int d : ds.values()) header.push_back("d=" + std::to_string(d));
      rows.push_back(header);
      for (int p : pv) {
        for (int i = 0; i <= n; ++i) {
          std::vector<std::string> row = {std::to_string(p), std::to_string(i)};
          for (int d : ds.values()) row.push_back(bott::h_omega(n, p, d, i).get_str());
          rows.push_back(std::move(row));
        }
      }
      std::vector<std::size_t> width(header.size(), 0);
      for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
      }
      os << "h^i(P^" << n << ", Omega^p(d))\n";
      for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "  " : "") << pad_left(row[k], width[k]);
        os << '\n';
      }
    }
  }
  emit(config, out, os.str());
  return Exit::ok;
}

namespace {

template <class F>
std::string coefficient_text(const F& field, const typename F::value_type& v) {
  if constexpr (std::is_same_v<F, PrimeField>) {
    return std::to_string(field.to_signed(v));
  } else {
    return v.get_str();
  }
}

template <class F>
ojson entry_json(const F& field, const typename F::value_type& v) {
  if constexpr (std::is_same_v<F, PrimeField>) {
    (void)field;
    return v;
  } else {
    if (v.get_den() == 1) return integer_json(v.get_num());
    return v.get_str();
  }
}

template <class F>
std::string section_h0(const F& field, const RunConfig& config, int n, int p, int d) {
  const auto space = forms::h0_basis(field, n, p, d);
  std::ostringstream os;
  if (config.format == Format::json) {
    ojson basis = ojson::array();
    for (std::size_t r = 0; r < space.ambient_dim(); ++r) {
      ojson row = ojson::array();
      for (std::size_t c = 0; c < space.dim(); ++c) row.push_back(entry_json(field, space.basis(r, c)));
      basis.push_back(std::move(row));
    }
    ojson j = {{"descriptor", {{"kind", "omega"}, {"n", n}, {"p", p}, {"d", d}, {"name", space.desc.name()}}},
               {"field", config.field.name()},
               {"dim", space.dim()},
               {"key", space.key},
               {"basis", basis}};
    os << j.dump(2) << '\n';
    return os.str();
  }
  if (config.format == Format::csv) {
    os << "section,coordinate,coefficient\n";
    for (std::size_t c = 0; c < space.dim(); ++c) {
      for (std::size_t r = 0; r < space.ambient_dim(); ++r) {
        if (!field.is_zero(space.basis(r, c))) {
          os << c << ',' << space.key[r] << ',' << coefficient_text(field, space.basis(r, c)) << '\n';
        }
      }
    }
    return os.str();
  }
  os << "h0(" << space.desc.name() << ") = " << space.dim() << " over " << config.field.name() << '\n';
  for (std::size_t c = 0; c < space.dim(); ++c) {
    os << "  [" << c << "]";
    bool first = true;
    for (std::size_t r = 0; r < space.ambient_dim(); ++r) {
      const auto& v = space.basis(r, c);
      if (field.is_zero(v)) continue;
      std::string coef = coefficient_text(field, v);
      const bool negative = coef[0] == '-';
      if (negative) coef.erase(0, 1);
      os << (first ? (negative ? " -" : " ") : (negative ? " - " : " + "));
      if (coef != "1") os << coef << ' ';
      os << space.key[r];
      first = false;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace

int cmd_h0(const RunConfig& config, std::ostream& out, std::ostream&) {
  const int n = single(config.n, "--n"), p = single(config.p, "--p"), d = single(config.d, "--d");
  if (n < 0 || p < 0 || p > n) throw UsageError("h0 needs 0 <= p <= n");
  const std::string text = visit_field(config.field, [&](const auto& f) { return section_h0(f, config, n, p, d); });
  emit(config, out, text);
  return Exit::ok;
}

int cmd_verify_display(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto ns = parse_range(config.n, "--n");
  const auto ps = parse_range(config.p, "--p", true);
  const auto ts = parse_range(config.t, "--t");
  std::optional<display::Square> fault;
  if (!config.inject_fault.empty()) {
    fault = display::parse_square(config.inject_fault);
    if (!fault) throw UsageError("--inject-fault: unknown square '" + config.inject_fault + "'");
  }
  std::vector<std::pair<int, int>> cells;
  for (int n : ns.values()) {
    if (n < 1) throw UsageError("verify-display needs n >= 1");
    const std::vector<int> pv = ps.all ? IntRange{0, n - 1}.values() : ps.values();
    for (int p : pv) {
      if (p < 0 || p + 1 > n) throw UsageError("--p " + std::to_string(p) + " needs 0 <= p <= n-1 for n = " + std::to_string(n));
      cells.emplace_back(n, p);
    }
  }
  std::vector<std::vector<display::DisplayReport>> results(cells.size());
  parallel_for(
      cells.size(),
      [&](std::size_t k) {
        results[k] = visit_field(config.field, [&](const auto& f) {
          return display::verify_display(f, cells[k].first, cells[k].second, ts.first, ts.last, fault, 1);
        });
      },
      config.threads);

  std::size_t total = 0, failed = 0;
  std::ostringstream os;
  ojson all = ojson::array();
  if (config.format == Format::csv) {
    os << "n,p,t,top,free,middle,right,bottom_left,bottom_middle,row2,row3,col1,col2,ok\n";
  }
  for (const auto& reports : results) {
    for (const auto& r : reports) {
      ++total;
      if (!r.ok()) {
        ++failed;
        for (const auto& f : r.failures) {
          err << "display n=" << r.n << " p=" << r.p << " t=" << r.t << ": " << f << '\n';
        }
      }
      if (config.format == Format::json) {
        all.push_back(display::to_json(r));
      } else if (config.format == Format::csv) {
        os << r.n << ',' << r.p << ',' << r.t;
        for (auto dim : r.dims) os << ',' << dim;
        for (const auto& s : r.sequences) os << ',' << display::verdict_name(s.verdict);
        os << ',' << (r.ok() ? "true" : "false") << '\n';
      } else {
        os << display::render_text(r);
      }
    }
  }
  if (config.format == Format::json) {
    os << all.dump(2) << '\n';
  } else if (config.format == Format::table) {
    os << total << " displays checked, " << failed << " failed\n";
  }
  emit(config, out, os.str());
  return failed == 0 ? Exit::ok : Exit::usage;
}

namespace {

std::string summary_line(const maxrank::RankCertificate& c) {
  std::ostringstream os;
  const auto ledger = maxrank::betti_ledger(c);
  os << "maxrank n=" << c.n << " p=" << c.p << " d=" << c.d << " s=" << c.s << " over " << c.field.name() << ": shape "
     << c.rows << "x" << c.cols << " rank " << c.rank << " " << (c.maximal ? "maximal" : "not witnessed")
     << " (trials " << c.trials << ", seed " << c.seed << "); kernel " << ledger.kernel << " cokernel "
     << ledger.cokernel << ", " << ledger.verdict << '\n';
  return os.str();
}

int verify_certificate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::ifstream file(config.verify);
  if (!file) throw UsageError("cannot read " + config.verify);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(file);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(config.verify + ": " + e.what());
  }
  const auto cert = maxrank::certificate_from_json(j);
  const auto r = maxrank::replay(cert);
  if (!r.matches) {
    err << "certificate " << config.verify << " does not replay: " << r.message << '\n';
    return Exit::usage;
  }
  out << "certificate " << config.verify << " replays: rank " << r.rank << ", "
      << (r.maximal ? "maximal" : "not witnessed") << '\n';
  return Exit::ok;
}

}  // namespace

int cmd_maxrank(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!config.verify.empty()) return verify_certificate(config, out, err);
  const int n = single(config.n, "--n"), p = single(config.p, "--p"), d = single(config.d, "--d");
  if (n < 1 || p < -1 || p + 1 > n) throw UsageError("maxrank needs n >= 1 and -1 <= p <= n-1");
  if (config.s < 0) throw UsageError("--s must be nonnegative");
  if (config.trials < 1) throw UsageError("--trials must be positive");
  maxrank::RankCertificate cert;
  try {
    cert = maxrank::maxrank_test(config.field, n, p, d, config.s, config.trials, config.seed);
  } catch (const maxrank::FieldTooSmall& e) {
    err << "field too small: " << e.what() << '\n';
    return Exit::usage;
  }
  const std::string doc = maxrank::to_json(cert).dump(2) + "\n";
  if (!config.out.empty()) {
    emit(config, out, doc);
    out << summary_line(cert);
  } else if (config.format == Format::json) {
    out << doc;
  } else if (config.format == Format::csv) {
    out << "n,p,d,s,field,seed,trials,rows,cols,rank,maximal\n"
        << n << ',' << p << ',' << d << ',' << config.s << ',' << config.field.name() << ',' << cert.seed << ','
        << cert.trials << ',' << cert.rows << ',' << cert.cols << ',' << cert.rank << ','
        << (cert.maximal ? "true" : "false") << '\n';
  } else {
    out << summary_line(cert);
  }
  return cert.maximal ? Exit::ok : Exit::not_witnessed;
}

int cmd_horace(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const int n = single(config.n, "--n"), p = single(config.p, "--p"), d = single(config.d, "--d");
  if (n < 1 || p < -1 || p + 1 > n) throw UsageError("horace needs n >= 1 and -1 <= p <= n-1");
  if (config.s < 0) throw UsageError("--s must be nonnegative");
  if (config.base < 0 || d < config.base) throw UsageError("horace needs d >= base >= 0");
  if (config.trials < 1) throw UsageError("--trials must be positive");
  horace::HoraceNode tree;
  try {
    tree = horace::verify_tree(horace::plan(n, p, d, config.s, config.base), config.field,
                               {config.trials, config.seed, config.threads});
  } catch (const maxrank::FieldTooSmall& e) {
    err << "field too small: " << e.what() << '\n';
    return Exit::usage;
  }
  const auto sum = horace::summarize(tree);
  std::ostringstream os;
  if (config.format == Format::json) {
    ojson j = {{"field", config.field.name()},
               {"seed", config.seed},
               {"base", config.base},
               {"tree", horace::to_json(tree)},
               {"summary",
                {{"nodes", sum.nodes},
                 {"witnessed", sum.witnessed},
                 {"not_witnessed", sum.not_witnessed},
                 {"implication_failures", sum.implication_failures},
                 {"ledger_mismatches", sum.ledger_mismatches}}}};
    os << j.dump(2) << '\n';
  } else {
    os << horace::render_tree(tree);
    os << sum.nodes << " nodes, " << sum.witnessed << " witnessed, " << sum.not_witnessed << " not witnessed, "
       << sum.implication_failures << " implication failures, " << sum.ledger_mismatches << " ledger mismatches\n";
  }
  emit(config, out, os.str());
  if (sum.implication_failures > 0) err << "implication-consistency failure in the tree\n";
  return sum.ok() ? Exit::ok : Exit::not_witnessed;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string field_kind = "prime";
  std::uint32_t q = 101;
  std::string format = "table";

  CLI::App app{"Exact checks for twisted differential forms on projective space", "pnforms"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
    sub->add_option("--out", config.out, "write the report (or certificate) to this file");
    sub->add_option("--seed", config.seed, "generator seed");
    sub->add_option("--q", q, "prime modulus of the working field");
    sub->add_option("--field", field_kind, "prime or rational")->check(CLI::IsMember({"prime", "rational"}));
    sub->add_option("--threads", config.threads, "worker threads (0 = all cores)");
  };

  auto* bott_cmd = app.add_subcommand("bott", "table of cohomology dimensions");
  bott_cmd->add_option("--n", config.n, "n or a..b")->required();
  bott_cmd->add_option("--p", config.p, "p, a..b or all")->required();
  bott_cmd->add_option("--d", config.d, "d or a..b")->required();
  common(bott_cmd);

  auto* h0_cmd = app.add_subcommand("h0", "basis of global sections");
  h0_cmd->add_option("--n", config.n)->required();
  h0_cmd->add_option("--p", config.p)->required();
  h0_cmd->add_option("--d", config.d)->required();
  common(h0_cmd);

  auto* display_cmd = app.add_subcommand("verify-display", "check the elementary transformation display");
  display_cmd->add_option("--n", config.n, "n or a..b")->required();
  display_cmd->add_option("--p", config.p, "p, a..b or all")->required();
  display_cmd->add_option("--t", config.t, "twist or a..b");
  display_cmd->add_option("--inject-fault", config.inject_fault)->group("");
  common(display_cmd);

  auto* maxrank_cmd = app.add_subcommand("maxrank", "maximal rank of the evaluation map");
  maxrank_cmd->add_option("--n", config.n);
  maxrank_cmd->add_option("--p", config.p);
  maxrank_cmd->add_option("--d", config.d);
  maxrank_cmd->add_option("--s", config.s, "number of points");
  maxrank_cmd->add_option("--trials", config.trials);
  maxrank_cmd->add_option("--verify", config.verify, "replay a certificate");
  common(maxrank_cmd);

  auto* horace_cmd = app.add_subcommand("horace", "plan and verify the specialization tree");
  horace_cmd->add_option("--n", config.n)->required();
  horace_cmd->add_option("--p", config.p)->required();
  horace_cmd->add_option("--d", config.d)->required();
  horace_cmd->add_option("--s", config.s)->required();
  horace_cmd->add_option("--base", config.base, "base degree")->required();
  horace_cmd->add_option("--trials", config.trials);
  common(horace_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? Exit::ok : Exit::usage;
  }

  try {
    config.format = format == "json" ? Format::json : format == "csv" ? Format::csv : Format::table;
    if (field_kind == "rational") {
      config.field = FieldSpec::rational();
    } else {
      if (q >= PrimeField::kMaxModulus || !is_prime(q)) throw UsageError("--q " + std::to_string(q) + " is not a supported prime");
      config.field = FieldSpec::prime(q);
    }
    if (bott_cmd->parsed()) return cmd_bott(config, out, err);
    if (h0_cmd->parsed()) return cmd_h0(config, out, err);
    if (display_cmd->parsed()) return cmd_verify_display(config, out, err);
    if (maxrank_cmd->parsed()) return cmd_maxrank(config, out, err);
    if (horace_cmd->parsed()) return cmd_horace(config, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return Exit::usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return Exit::usage;
  }
  return Exit::usage;
}

}  // namespace pnforms::cli
