#include "heegner/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "heegner/arith.hpp"
#include "heegner/binary_qf.hpp"
#include "heegner/errors.hpp"
#include "heegner/genus.hpp"
#include "heegner/measures.hpp"
#include "heegner/serialize.hpp"
#include "heegner/surjectivity.hpp"
#include "heegner/theta_cache.hpp"

namespace heegner::cli {

namespace {

using io::json;
using ternary::i64;
using ternary::u64;

struct RunConfig {
    std::string command;
    u64 ell = 0;
    u64 N = 1;
    i64 D = 0;
    i64 c = 1;
    i64 bound = 0;
    i64 lo = 0;
    i64 cmax = 200;
    int kmax = 4;
    u64 pmax = 100;
    std::string gram;
    std::string threshold;
    std::string cutoff = "pa";
    std::string format = "json";
    std::string out_path;
    std::string cache_dir;
    bool no_cache = false;
    unsigned threads = 0;
};

ternary::TernaryForm parse_form(const std::string& s) {
    std::vector<i64> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            v.push_back(std::stoll(item));
        } catch (const std::exception&) {
            throw std::invalid_argument("--gram: '" + item + "' is not an integer");
        }
    }
    if (v.size() != 6) throw std::invalid_argument("--gram expects six integers a,b,c,f,g,h");
    return ternary::TernaryForm::from_coefficients(v[0], v[1], v[2], v[3], v[4], v[5]);
}

void require_ell(const RunConfig& cfg) {
    if (cfg.ell == 0) throw std::invalid_argument("--ell is required");
    if (!arith::is_prime(cfg.ell)) throw std::invalid_argument("--ell must be prime");
    if (cfg.N != 1) throw std::invalid_argument("--N: only N = 1 is supported");
}

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
    for (const char* f : allowed)
        if (cfg.format == f) return;
    throw std::invalid_argument("--format " + cfg.format + " is not available for " + cfg.command);
}

std::string cmd_genus(const RunConfig& cfg) {
    require_ell(cfg);
    require_format(cfg, {"json"});
    return io::to_json(genus::gross_genus(cfg.ell, cfg.N)).dump(2);
}

std::string cmd_classnum(const RunConfig& cfg) {
    require_format(cfg, {"json"});
    const binary_qf::OrderParams params(cfg.D, cfg.c);
    json j;
    j["D"] = params.D();
    j["c"] = params.c();
    j["disc"] = params.discriminant();
    j["h"] = binary_qf::class_number_order(params);
    j["u"] = binary_qf::unit_count(params);
    return j.dump(2);
}

std::string cmd_theta(const RunConfig& cfg, std::ostream& err) {
    require_format(cfg, {"json", "text"});
    if (cfg.bound < 0) throw std::invalid_argument("--bound must be non-negative");
    if (cfg.lo < 0 || cfg.lo > cfg.bound) throw std::invalid_argument("--lo must lie in [0, bound]");
    std::vector<ternary::TernaryForm> forms;
    if (!cfg.gram.empty()) {
        forms.push_back(parse_form(cfg.gram));
    } else {
        require_ell(cfg);
        for (const auto& c : genus::gross_genus(cfg.ell, cfg.N).classes) forms.push_back(c.form);
    }
    std::optional<cache::ThetaCache> store;
    if (!cfg.no_cache) {
        if (!cfg.cache_dir.empty())
            store.emplace(cfg.cache_dir, err);
        else if (auto dir = cache::ThetaCache::default_dir())
            store.emplace(*dir, err);
    }
    json j;
    j["lo"] = cfg.lo;
    j["hi"] = cfg.bound;
    j["forms"] = json::array();
    std::ostringstream text;
    for (const auto& q : forms) {
        std::vector<u64> block;
        if (store) {
            block = store->fetch(q, cfg.lo, cfg.bound, cfg.threads);
        } else {
            const auto full = ternary::theta_coeffs(q, cfg.bound, cfg.threads);
            block.assign(full.begin() + cfg.lo, full.end());
        }
        json e;
        e["gram"] = io::gram_json(q.gram());
        json coeffs = json::array();
        text << "# " << q.str() << "\n";
        for (std::size_t i = 0; i < block.size(); ++i) {
            if (block[i] == 0) continue;
            coeffs.push_back(json::array({cfg.lo + static_cast<i64>(i), block[i]}));
            text << cfg.lo + static_cast<i64>(i) << " " << block[i] << "\n";
        }
        e["coefficients"] = coeffs;
        j["forms"].push_back(e);
    }
    return cfg.format == "text" ? text.str() : j.dump(2);
}

std::string cmd_measure(const RunConfig& cfg) {
    require_ell(cfg);
    require_format(cfg, {"json"});
    const auto g = genus::gross_genus(cfg.ell, cfg.N);
    const binary_qf::OrderParams params(cfg.D, cfg.c);
    const auto mu = measures::mu_heegner(g, params, cfg.N);
    return io::to_json(g, mu, measures::mu_canonical(g), cfg.D, cfg.c).dump(2);
}

std::string cmd_converge(const RunConfig& cfg) {
    require_ell(cfg);
    require_format(cfg, {"json"});
    if (cfg.cmax < 1) throw std::invalid_argument("--cmax must be positive");
    if (cfg.kmax < 1) throw std::invalid_argument("--kmax must be positive");
    const auto g = genus::gross_genus(cfg.ell, cfg.N);
    if (g.size() != 2) throw std::invalid_argument("converge: the genus must have exactly 2 classes");
    const auto can = measures::mu_canonical(g);
    auto tv_at = [&](i64 c) {
        return measures::tv_distance(measures::mu_heegner(g, binary_qf::OrderParams(cfg.D, c), cfg.N), can);
    };
    const Rational tv1 = tv_at(1);
    auto table = surjectivity::build_eigenvalue_table(g, static_cast<u64>(cfg.cmax), cfg.threads);

    json j;
    j["ell"] = cfg.ell;
    j["N"] = cfg.N;
    j["D"] = cfg.D;
    j["tv_1"] = tv1.str();
    json primes = json::array();
    for (u64 p : arith::primes_up_to(static_cast<u64>(cfg.cmax))) {
        if (p == cfg.ell || arith::kronecker(cfg.D, static_cast<i64>(p)) != -1) continue;
        const Rational tv = tv_at(static_cast<i64>(p));
        const i64 a = table.at_prime(p);
        const Rational ratio(std::abs(a), static_cast<i64>(p) + 1);
        // tv <= 2 sqrt(p)/(p+1) tv_1  <=>  (tv (p+1))^2 <= 4 p tv_1^2
        const Rational lhs = tv * Rational(static_cast<i64>(p) + 1);
        json e;
        e["c"] = p;
        e["a_G"] = a;
        e["tv"] = tv.str();
        e["exact_decay"] = (tv == ratio * tv1);
        e["bound_holds"] = (lhs * lhs <= Rational(4 * static_cast<i64>(p)) * tv1 * tv1);
        primes.push_back(e);
    }
    j["inert_primes"] = primes;
    json powers = json::array();
    for (u64 p : arith::primes_up_to(static_cast<u64>(cfg.cmax))) {
        if (p == cfg.ell || arith::kronecker(cfg.D, static_cast<i64>(p)) != -1) continue;
        if (arith::checked_pow(static_cast<i64>(p), cfg.kmax) > 1000) break;
        json e;
        e["p"] = p;
        json tvs = json::array();
        std::vector<Rational> seq;
        for (int k = 0; k <= cfg.kmax; ++k) {
            seq.push_back(tv_at(arith::checked_pow(static_cast<i64>(p), k)));
            tvs.push_back(seq.back().str());
        }
        bool strict = true, nonincreasing = true;
        for (std::size_t k = 1; k < seq.size(); ++k) {
            strict = strict && seq[k] < seq[k - 1];
            nonincreasing = nonincreasing && seq[k] <= seq[k - 1];
        }
        e["tv"] = tvs;
        e["strictly_decreasing"] = strict;
        e["nonincreasing"] = nonincreasing;
        powers.push_back(e);
    }
    j["prime_powers"] = powers;
    return j.dump(2);
}

std::string cmd_eigen(const RunConfig& cfg) {
    require_ell(cfg);
    require_format(cfg, {"json"});
    const auto g = genus::gross_genus(cfg.ell, cfg.N);
    return io::to_json(surjectivity::build_eigenvalue_table(g, cfg.pmax, cfg.threads)).dump(2);
}

std::string cmd_surject(const RunConfig& cfg) {
    require_ell(cfg);
    require_format(cfg, {"json", "csv"});
    const auto g = genus::gross_genus(cfg.ell, cfg.N);
    surjectivity::SearchOptions opts;
    opts.threads = cfg.threads;
    if (!cfg.threshold.empty()) {
        opts.threshold = Rational::parse(cfg.threshold);
        if (opts.threshold->sign() <= 0) throw std::invalid_argument("--threshold must be positive");
    }
    if (cfg.cutoff == "hasse")
        opts.cutoff = surjectivity::PrimeCutoff::Hasse;
    else if (cfg.cutoff != "pa")
        throw std::invalid_argument("--cutoff must be 'pa' or 'hasse'");
    surjectivity::EigenvalueTable table(cfg.ell);
    const auto rep = surjectivity::dfs_search(g, table, opts);
    if (cfg.format == "csv") return io::search_csv(rep);
    return io::to_json(rep).dump(2);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Heegner point equidistribution and effective surjectivity toolkit", "heegner"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out_path, "write output to this file");
        sub->add_option("--format", cfg.format, "json | csv | text");
        sub->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
    };
    auto ell_opts = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--ell", cfg.ell, "prime level");
        if (required) o->required();
        sub->add_option("--N", cfg.N, "auxiliary level (only 1)");
    };

    auto* genus_cmd = app.add_subcommand("genus", "Gross genus: classes, weights, mass");
    ell_opts(genus_cmd, true);
    common(genus_cmd);

    auto* classnum = app.add_subcommand("classnum", "class number of the order O_{D,c}");
    classnum->add_option("--D", cfg.D, "negative fundamental discriminant")->required();
    classnum->add_option("--c", cfg.c, "conductor");
    common(classnum);

    auto* theta = app.add_subcommand("theta", "theta coefficients r(Q, n)");
    ell_opts(theta, false);
    theta->add_option("--gram", cfg.gram, "form a,b,c,f,g,h with Gram [[a,h,g],[h,b,f],[g,f,c]]");
    theta->add_option("--bound", cfg.bound, "largest n")->required();
    theta->add_option("--lo", cfg.lo, "smallest n");
    theta->add_option("--cache", cfg.cache_dir, "cache directory");
    theta->add_flag("--no-cache", cfg.no_cache, "ignore the cache");
    common(theta);

    auto* measure = app.add_subcommand("measure", "distribution of Heegner points on the classes");
    ell_opts(measure, true);
    measure->add_option("--D", cfg.D, "negative fundamental discriminant")->required();
    measure->add_option("--c", cfg.c, "conductor");
    common(measure);

    auto* converge = app.add_subcommand("converge", "distance to the canonical measure along conductors");
    ell_opts(converge, true);
    converge->add_option("--D", cfg.D, "negative fundamental discriminant")->required();
    converge->add_option("--cmax", cfg.cmax, "largest inert prime conductor");
    converge->add_option("--kmax", cfg.kmax, "largest exponent along prime powers");
    common(converge);

    auto* eigen = app.add_subcommand("eigen", "Hecke eigenvalues from theta coefficients");
    ell_opts(eigen, true);
    eigen->add_option("--pmax", cfg.pmax, "largest prime");
    common(eigen);

    auto* surject = app.add_subcommand("surject", "conductors not covered by the surjectivity bound");
    ell_opts(surject, true);
    surject->add_option("--threshold", cfg.threshold, "replace every m_s by this rational");
    surject->add_option("--cutoff", cfg.cutoff, "prime cutoff: pa | hasse");
    common(surject);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kValidation;
    }

    try {
        std::string result;
        if (genus_cmd->parsed()) {
            cfg.command = "genus";
            result = cmd_genus(cfg);
        } else if (classnum->parsed()) {
            cfg.command = "classnum";
            result = cmd_classnum(cfg);
        } else if (theta->parsed()) {
            cfg.command = "theta";
            result = cmd_theta(cfg, err);
        } else if (measure->parsed()) {
            cfg.command = "measure";
            result = cmd_measure(cfg);
        } else if (converge->parsed()) {
            cfg.command = "converge";
            result = cmd_converge(cfg);
        } else if (eigen->parsed()) {
            cfg.command = "eigen";
            result = cmd_eigen(cfg);
        } else {
            cfg.command = "surject";
            result = cmd_surject(cfg);
        }
        if (!result.empty() && result.back() != '\n') result += '\n';
        if (cfg.out_path.empty()) {
            out << result;
        } else {
            std::ofstream f(cfg.out_path);
            if (!f) throw std::invalid_argument("--out: cannot open " + cfg.out_path);
            f << result;
        }
        return kOk;
    } catch (const InvariantError& e) {
        err << "internal invariant failure: " << e.what() << "\n";
        return kInvariant;
    } catch (const std::invalid_argument& e) {
        err << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::out_of_range& e) {
        err << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInvariant;
    }
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args, std::cout, std::cerr);
}

}  // namespace heegner::cli
