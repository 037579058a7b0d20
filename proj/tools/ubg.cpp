// ubg: build the stage chain, query distances and norms, run the
// verification suites and oracles, export tables.
//
// Exit codes: 0 success / all checks pass, 1 a verification check failed,
// 2 usage, configuration, evaluation or I/O error.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ubg/construction.hpp"
#include "ubg/export.hpp"
#include "ubg/expr.hpp"
#include "ubg/oracle.hpp"
#include "ubg/universal.hpp"
#include "ubg/verify.hpp"

using namespace ubg;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Options {
  std::string config_path;
  std::string tables_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

Config load_config(const Options& o) {
  Config cfg = o.config_path.empty() ? Config{} : Config::load(o.config_path);
  if (o.seed_set) cfg.seed = o.seed;
  return cfg;
}

/// Built from the config, or loaded from a previous export with --tables.
Construction obtain(const Options& o) {
  if (o.tables_path.empty()) return build(load_config(o));
  auto doc = import_tables(o.tables_path);
  Construction c = std::move(doc.construction);
  if (!o.config_path.empty()) c.cfg = load_config(o);
  if (o.seed_set) c.cfg.seed = o.seed;
  return c;
}

int print_reports(const std::vector<VerificationReport>& reps) {
  bool ok = true;
  for (const auto& r : reps) {
    std::cout << r.str();
    ok = ok && r.ok();
  }
  return ok ? kPass : kFail;
}

const char* kind_name(StageKind k) { return k == StageKind::kWord ? "word" : "vector"; }

int cmd_build(const Options& o, const std::string& out, bool verify) {
  Construction c = build(load_config(o), [](const StageBuildInfo& i) {
    std::cout << "X_" << i.index << ": " << i.members << " members (" << kind_name(i.kind) << ")";
    if (i.kind == StageKind::kWord) {
      std::cout << ", ambient " << i.ambient;
    } else {
      std::cout << ", " << i.molecules << " molecules, " << i.lp_solved << " programs";
    }
    std::cout << ", " << i.sweeps << " sweeps" << std::endl;
  });
  std::vector<ExportSummary> summaries;
  int code = kPass;
  if (verify) {
    std::vector<VerificationReport> reps = check_conditions(c);
    for (auto& r : check_biinvariance_all(c)) reps.push_back(std::move(r));
    for (auto& r : check_universal(c)) reps.push_back(std::move(r));
    code = print_reports(reps);
    for (const auto& r : reps) summaries.push_back(ExportSummary::of(r));
  }
  export_tables(c, out, summaries);
  std::cout << "wrote " << out << "\n";
  return code;
}

int cmd_dist(const Options& o, const std::string& a_text, const std::string& b_text) {
  Construction c = obtain(o);
  const ElementId a = eval_text(a_text, c), b = eval_text(b_text, c);
  for (const auto& s : c.stages) {
    if (s.is_word() && s.contains(a) && s.contains(b)) {
      std::cout << s.metric(a, b) << " (stage " << s.index << ")\n";
      return kPass;
    }
  }
  // Both vectors: the norm of their difference where it lies in a stage.
  std::pair<Dyadic, ElementId> t[2] = {{Dyadic(1), a}, {Dyadic(-1), b}};
  const ElementId d = c.store.intern(c.store.linear_combination(t));
  const auto [v, n] = c.norm(d);
  std::cout << v << " (stage " << n << ", norm of " << c.store.render(d) << ")\n";
  return kPass;
}

int cmd_norm(const Options& o, const std::string& text) {
  Construction c = obtain(o);
  const auto [v, n] = c.norm(eval_text(text, c));
  std::cout << v << " (stage " << n << ")\n";
  return kPass;
}

int cmd_verify(const Options& o, const std::string& suite) {
  Construction c = obtain(o);
  std::vector<VerificationReport> reps;
  const bool all = suite == "all";
  if (all || suite == "conditions") {
    for (auto& r : check_conditions(c)) reps.push_back(std::move(r));
  }
  if (all || suite == "biinvariance") {
    for (auto& r : check_biinvariance_all(c)) reps.push_back(std::move(r));
  }
  if (all || suite == "universal") {
    for (auto& r : check_universal(c)) reps.push_back(std::move(r));
  }
  const int code = print_reports(reps);
  const auto total = summarize("verify " + suite, reps);
  std::cout << total.suite << ": " << (total.ok() ? "PASS" : "FAIL") << " (" << total.passed() << "/"
            << total.attempted << " checks)\n";
  return code;
}

int cmd_oracle(const Options& o, std::size_t rho_limit, int rho_cap) {
  Construction c = obtain(o);
  std::vector<VerificationReport> reps;

  if (c.top_index() >= 2) {
    const Stage& s2 = c.stage(2);
    const ElementId x = *c.store.find(ElementTerm::generator(0));
    const ElementId xi = *c.store.find(c.store.group_inv(x));
    VerificationReport three;
    three.suite = "norm_2 vs three-variable minimization";
    for (std::size_t i = 0; i < s2.size(); ++i) {
      Rational a, b;
      for (const auto& e : c.store.vector_of(s2.members[i])) {
        if (e.basis == x) a = e.coef.to_rational();
        if (e.basis == xi) b = e.coef.to_rational();
      }
      const Rational want = oracle::norm2_three_variable(a, b);
      three.check(s2.norm[i] == want, "norm_2", {s2.members[i]}, [&] {
        return c.store.render(s2.members[i]) + ": table " + s2.norm[i].str() + ", oracle " + want.str();
      });
    }
    reps.push_back(three);

    VerificationReport lp;
    lp.suite = "gamma programs vs basic-solution enumeration";
    Gamma gamma(c.store, c.stage(1));
    for (auto id : s2.members) {
      const Vector v = c.store.vector_of(id);
      const auto want = oracle::lp_by_vertices(gamma.molecules(), v);
      const Rational got = gamma.lp(v);
      lp.check(want && got == *want, "gamma", {id}, [&] {
        return c.store.render(id) + ": program " + got.str() + ", oracle " + bound_str(want);
      });
    }
    reps.push_back(lp);
  }

  if (c.top_index() >= 3) {
    const Stage& s3 = c.stage(3);
    VerificationReport fac;
    fac.suite = "rho_3 vs bounded factorization search";
    bool rank0 = true;
    for (auto id : c.stage(2).members) rank0 = rank0 && c.store.rank(id) == 0;
    if (s3.size() > rho_limit || !rank0) {
      fac.notes.push_back("skipped: X_3 has " + std::to_string(s3.size()) + " members (limit " +
                          std::to_string(rho_limit) + ")" + (rank0 ? "" : " or X_2 has convex elements"));
    } else {
      const auto want = oracle::rho_by_factorization(c.store, s3, c.stage(2), c.cfg.decomp_cap, rho_cap);
      const std::size_t n = s3.size();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const auto& w = want[i * n + j];
          fac.check(w && *w == s3.rho_at(i, j), "rho_3", {s3.members[i], s3.members[j]}, [&] {
            return c.store.render(s3.members[i]) + " , " + c.store.render(s3.members[j]) + ": table " +
                   s3.rho_at(i, j).str() + ", oracle " + bound_str(w);
          });
        }
      }
    }
    reps.push_back(fac);
  }
  return print_reports(reps);
}

int cmd_bench(const Options& o) {
  using Clock = std::chrono::steady_clock;
  const Config cfg = load_config(o);
  std::printf("%-24s %10s %10s\n", "phase", "members", "seconds");
  Construction c = build(cfg, [](const StageBuildInfo& i) {
    std::printf("build X_%-18d %10zu %10.3f\n", i.index, i.members, i.seconds);
  });
  auto timed = [&](const char* name, auto&& f) {
    const auto t0 = Clock::now();
    const auto reps = f();
    bool ok = true;
    for (const auto& r : reps) ok = ok && r.ok();
    std::printf("%-24s %10s %10.3f%s\n", name, "", std::chrono::duration<double>(Clock::now() - t0).count(),
                ok ? "" : "  FAIL");
    return ok;
  };
  bool ok = timed("verify conditions", [&] { return check_conditions(c); });
  ok = timed("verify biinvariance", [&] { return check_biinvariance_all(c); }) && ok;
  ok = timed("verify universal", [&] { return check_universal(c); }) && ok;
  const auto t0 = Clock::now();
  const std::string text = export_string(c);
  std::printf("%-24s %10zu %10.3f\n", "export (bytes)", text.size(),
              std::chrono::duration<double>(Clock::now() - t0).count());
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bi-invariant metric and norm tables on the stage chain X_0, X_1, ..."};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config_path, "config file (key = value lines)")->check(CLI::ExistingFile);
  app.add_option("--tables", opt.tables_path, "load stages from an export instead of building")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", opt.seed, "seed for sampled checks")->each([&](const std::string&) {
    opt.seed_set = true;
  });

  std::string out = "ubg-export.json";
  bool build_verify = false;
  auto* build_cmd = app.add_subcommand("build", "build the stages and write the export document");
  build_cmd->add_option("--out", out, "export path");
  build_cmd->add_flag("--verify", build_verify, "run every suite and embed the summaries");

  std::string e1, e2;
  auto* dist_cmd = app.add_subcommand("dist", "rho, or the norm of the difference");
  dist_cmd->add_option("e1", e1)->required();
  dist_cmd->add_option("e2", e2)->required();

  std::string e;
  auto* norm_cmd = app.add_subcommand("norm", "norm of an element");
  norm_cmd->add_option("e", e)->required();

  std::string suite = "all";
  auto* verify_cmd = app.add_subcommand("verify", "run verification suites");
  verify_cmd->add_option("--suite", suite)->check(CLI::IsMember({"conditions", "biinvariance", "universal", "all"}));

  std::size_t rho_limit = 400;
  auto* oracle_cmd = app.add_subcommand("oracle", "cross-check tables against brute-force oracles");
  int rho_cap = 4;
  oracle_cmd->add_option("--rho-limit", rho_limit, "largest X_3 checked by factorization search");
  oracle_cmd->add_option("--rho-cap", rho_cap, "pieces per rho factorization (delta uses decomp_cap)");

  auto* bench_cmd = app.add_subcommand("bench", "timings table");

  for (auto* sub : {build_cmd, dist_cmd, norm_cmd, verify_cmd, oracle_cmd, bench_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*build_cmd) return cmd_build(opt, out, build_verify);
    if (*dist_cmd) return cmd_dist(opt, e1, e2);
    if (*norm_cmd) return cmd_norm(opt, e);
    if (*verify_cmd) return cmd_verify(opt, suite);
    if (*oracle_cmd) return cmd_oracle(opt, rho_limit, rho_cap);
    if (*bench_cmd) return cmd_bench(opt);
  } catch (const Error& err) {
    std::cerr << "ubg: " << err.what() << "\n";
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "ubg: " << err.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
