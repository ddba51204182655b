// bk: command line front end for the schubcalc engines
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "schubcalc/bk.hpp"
#include "schubcalc/kostant.hpp"

namespace {

using parabolic::parse_index_list;
using report::Report;
using rootsys::WeylElt;
using json = nlohmann::ordered_json;

struct Common {
  std::string type;
  std::string levi;
  std::string format = "text";
  std::string output;
  uint64_t max_weyl = 1152;
  uint64_t enum_bound = 51840;
};

// what a command produced: a report, or a free-form json document plus its text form
struct Result {
  std::optional<Report> rep;
  json doc;
  std::string text;
};

void add_common(CLI::App* c, Common& o, bool need_levi = true) {
  c->add_option("--type", o.type, "root system, e.g. A3, G2, F4")->required();
  if (need_levi) c->add_option("--levi", o.levi, "simple roots of the Levi, 1-based, e.g. \"1,3\"; empty for G/B");
  c->add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  c->add_option("--output", o.output, "output file; relative paths go under $BK_OUTPUT_DIR");
  c->add_option("--max-weyl", o.max_weyl, "largest |W| for Schubert polynomials and tables")->check(CLI::PositiveNumber);
  c->add_option("--enum-bound", o.enum_bound, "largest |W| for element enumeration")->check(CLI::PositiveNumber);
}

Report base(const std::string& cmd, const Common& o) {
  Report r;
  r.command = cmd;
  r.type = o.type;
  r.levi = parse_index_list(o.levi);
  return r;
}

std::string wstr(const WeylElt& w) { return w.str(); }

std::string root_str(const rootsys::Root& r) {
  std::string s = "[";
  for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + std::to_string(r[i]);
  return s + "]";
}

void write(const Result& res, const Common& o) {
  std::string body;
  if (res.rep) {
    if (o.format == "json") body = report::to_json(*res.rep).dump(2) + "\n";
    else if (o.format == "csv") body = report::to_csv(*res.rep);
    else body = res.text.empty() ? report::to_text(*res.rep) : res.text;
  } else {
    if (o.format == "text") body = res.text;
    else if (o.format == "json") body = res.doc.dump(2) + "\n";
    else throw schubcalc::UsageError("csv is not available for this command");
  }
  if (o.output.empty()) {
    std::cout << body;
    return;
  }
  std::filesystem::path p(o.output);
  if (p.is_relative())
    if (const char* dir = std::getenv("BK_OUTPUT_DIR")) p = std::filesystem::path(dir) / p;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw schubcalc::UsageError("cannot write " + p.string());
  f << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schubert calculus on G/P: cup and Belkale-Kumar products, filtrations, Kostant forms"};
  app.require_subcommand(1);

  Common o;
  std::string u_w, v_w, w_w, word, reading = "dual", zs;
  int deg = 0, p = 0;
  bool p_only = false;
  uint64_t cup_max = 48;
  unsigned threads = 0;
  int max_u = 6;
  std::size_t max_module = 4096;

  auto* product = app.add_subcommand("product", "cup product sigma_u . sigma_v");
  auto* bkprod = app.add_subcommand("bk-product", "Belkale-Kumar product sigma_u (.)_0 sigma_v");
  for (auto* c : {product, bkprod}) {
    add_common(c, o);
    c->add_option("--u", u_w, "word of u, 1-based")->required();
    c->add_option("--v", v_w, "word of v, 1-based")->required();
  }
  auto* table = app.add_subcommand("table", "full cup table with the Belkale-Kumar coefficient of each entry");
  add_common(table, o);

  auto* conj5 = app.add_subcommand("verify-conj5", "coefficient 1 for every partition triple of G/B");
  add_common(conj5, o, false);
  conj5->add_flag("--p-only", p_only, "skip the BGG cross-check");
  conj5->add_option("--cup-max", cup_max, "largest |W| for the BGG cross-check");
  conj5->add_option("--threads", threads, "worker threads, 0 for all cores");

  auto* conj3 = app.add_subcommand("verify-conj3", "group nonzero products by Phi_uv");
  add_common(conj3, o);

  auto* pval = app.add_subcommand("pvalue", "p(w) = prod (rho, alpha) over alpha > 0 with w^-1 alpha > 0");
  add_common(pval, o, false);
  pval->add_option("--word", word, "word, 1-based")->required();
  pval->add_option("--reading", reading, "dual: w = w0 . word; literal: w = word")
      ->check(CLI::IsMember({"dual", "literal"}));

  auto* filt = app.add_subcommand("filtration", "Schubert classes spanning F^{<= (z, deg)} H^p");
  add_common(filt, o);
  filt->add_option("--z", zs, "X(Z) part, comma separated rationals")->required();
  filt->add_option("--deg", deg, "degree part")->required();
  filt->add_option("--p", p, "cohomological degree, l(w)")->required();

  auto* kos = app.add_subcommand("kostant", "harmonic representative s_w in the exterior algebra of r*");
  add_common(kos, o);
  kos->add_option("--word", word, "word of w in W^P, 1-based")->required();
  kos->add_option("--max-u", max_u, "largest |Phi(u)|")->check(CLI::PositiveNumber);
  kos->add_option("--max-module", max_module, "largest Levi module")->check(CLI::PositiveNumber);

  auto* sig = app.add_subcommand("sigma", "Phi_uv and its tangent weights");
  add_common(sig, o);
  sig->add_option("--u", u_w, "word of u, 1-based")->required();
  sig->add_option("--v", v_w, "word of v, 1-based")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    auto rs = rootsys::build_root_system(o.type);
    auto elt = [&](const std::string& s) { return rs->from_word1(parse_index_list(s)); };
    schubert::Budget budget{o.max_weyl};
    Result res;
    auto* cmd = app.get_subcommands().front();
    std::string name = cmd->get_name();

    if (cmd == product || cmd == bkprod) {
      auto ctx = parabolic::make_context(rs, parse_index_list(o.levi));
      auto u = elt(u_w), v = elt(v_w);
      ctx->require_WP(u, "u");
      ctx->require_WP(v, "v");
      auto cls = cmd == product ? schubert::cup_constants(ctx, u, v, budget) : bk::bk_product(ctx, u, v, budget);
      Report r = base(name, o);
      for (auto& [w, c] : cls.coeffs) {
        report::Entry e{{wstr(u), wstr(v), wstr(w)}, std::nullopt, std::nullopt, std::nullopt, "ok"};
        (cmd == product ? e.cup_coeff : e.bk_coeff) = c.get_str();
        r.entries.push_back(e);
      }
      r.summary["class"] = bk::class_str(cls);
      r.coverage = "single product";
      res.rep = r;
      res.text = r.summary["class"] + "\n";
    } else if (cmd == table) {
      auto ctx = parabolic::make_context(rs, parse_index_list(o.levi));
      Report r = base(name, o);
      auto tab = schubert::cup_table(ctx, budget);
      std::size_t kept = 0;
      for (auto& t : tab) {
        bool keep = parabolic::gd_add(parabolic::gd_vector(*ctx, t.u), parabolic::gd_vector(*ctx, t.v)) ==
                    parabolic::gd_add(parabolic::gd_vector(*ctx, t.w), parabolic::gd_vector(*ctx, ctx->top()));
        kept += keep;
        r.entries.push_back({{wstr(t.u), wstr(t.v), wstr(t.w)}, t.coeff.get_str(),
                             (keep ? t.coeff : mpq_class(0)).get_str(), std::nullopt, "ok"});
      }
      r.summary["nonzero_cup"] = std::to_string(tab.size());
      r.summary["nonzero_bk"] = std::to_string(kept);
      r.coverage = "all pairs in W^P x W^P";
      res.rep = r;
    } else if (cmd == conj5) {
      bk::Conj5Options opt;
      opt.use_cup = !p_only;
      opt.cup_max_weyl = cup_max;
      opt.enum_bound = o.enum_bound;
      opt.threads = threads;
      res.rep = bk::verify_conjecture5(rs, opt);
    } else if (cmd == conj3) {
      auto ctx = parabolic::make_context(rs, parse_index_list(o.levi));
      res.rep = bk::verify_conjecture3_grouping(ctx, budget);
    } else if (cmd == pval) {
      auto w = elt(word);
      if (reading == "dual") w = rs->mul(rs->w0(), w);
      auto val = bk::p_value(w);
      Report r = base(name, o);
      r.entries.push_back({{wstr(w)}, std::nullopt, std::nullopt, std::nullopt, "ok"});
      r.summary["p"] = val.get_str();
      r.summary["reading"] = reading;
      r.coverage = "single element";
      res.rep = r;
      res.text = val.get_str() + "\n";
    } else if (cmd == filt) {
      auto ctx = parabolic::make_context(rs, parse_index_list(o.levi));
      bk::FiltrationIndex beta;
      std::stringstream ss(zs);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        try {
          beta.z_part.emplace_back(tok);
        } catch (const std::invalid_argument&) {
          throw schubcalc::UsageError("bad rational '" + tok + "'");
        }
        beta.z_part.back().canonicalize();
      }
      if (beta.z_part.size() != static_cast<std::size_t>(ctx->z_rank()))
        throw schubcalc::UsageError("--z needs " + std::to_string(ctx->z_rank()) + " entries");
      beta.degree_part = deg;
      Report r = base(name, o);
      for (auto& w : bk::filtration_span(*ctx, beta, p)) {
        auto rt = bk::rho_tilde(*ctx, w);
        r.entries.push_back({{wstr(w), parabolic::zweight_str(rt.z_part), std::to_string(rt.degree_part)},
                             std::nullopt, std::nullopt, std::nullopt, "in span"});
      }
      r.summary["dimension"] = std::to_string(r.entries.size());
      r.coverage = "all w in W^P of length " + std::to_string(p);
      res.rep = r;
    } else if (cmd == kos) {
      auto ctx = parabolic::make_context(rs, parse_index_list(o.levi));
      kostant::KostantContext K(ctx, {max_u, max_module});
      auto w = elt(word);
      auto terms = kostant::form_terms(K, K.s(w));
      json arr = json::array();
      std::string text;
      for (auto& t : terms) {
        json neg = json::array(), pos = json::array();
        std::string ns, ps;
        for (auto& r : t.negative_part) {
          neg.push_back(r);
          ns += (ns.empty() ? "" : " ") + root_str(r);
        }
        for (auto& r : t.positive_part) {
          pos.push_back(r);
          ps += (ps.empty() ? "" : " ") + root_str(r);
        }
        arr.push_back({{"negative_part", neg},
                       {"positive_part", pos},
                       {"coeff_re", t.coeff.re.get_str()},
                       {"coeff_im", t.coeff.im.get_str()}});
        text += t.coeff.re.get_str() + (t.coeff.im == 0 ? "" : " + " + t.coeff.im.get_str() + "i") + "  (" + ns +
                " | " + ps + ")\n";
      }
      res.doc = {{"schema_version", report::kSchemaVersion}, {"command", name}, {"type", o.type},
                 {"levi", parse_index_list(o.levi)}, {"w", w.str()}, {"terms", arr}};
      res.text = text;
    } else if (cmd == sig) {
      auto ctx = parabolic::make_context(rs, parse_index_list(o.levi));
      auto d = bk::sigma_uv(ctx, elt(u_w), elt(v_w));
      Report r = base(name, o);
      auto roots = [&](const std::vector<int>& v) {
        std::string s;
        for (int x : v) s += (s.empty() ? "" : " ") + root_str(rs->root(x));
        return s;
      };
      r.summary["phi_uv"] = roots(d.phi_uv);
      r.summary["tangent"] = roots(d.tangent);
      r.summary["rho_sigma"] = parabolic::zweight_str(d.rho_sigma);
      std::string tw;
      for (auto& [z, m] : d.tangent_weights) tw += (tw.empty() ? "" : " ") + parabolic::zweight_str(z) + "^" + std::to_string(m);
      r.summary["tangent_weights"] = tw;
      r.coverage = "single pair";
      res.rep = r;
    }
    write(res, o);
  } catch (const schubcalc::BudgetError& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return 3;
  } catch (const schubcalc::UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const schubcalc::InvariantError& e) {
    std::cerr << "invariant: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
