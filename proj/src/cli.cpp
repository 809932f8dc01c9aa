#include "gcrm/cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gcrm/dirichlet.hpp"
#include "gcrm/estimators.hpp"
#include "gcrm/kernels.hpp"
#include "gcrm/quadrature.hpp"
#include "gcrm/samplers.hpp"
#include "gcrm/specfun.hpp"
#include "gcrm/subordination.hpp"

namespace gcrm::cli {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

long long parse_int(const std::string& text) {
    std::string t = trim(text);
    if (t.empty())
        throw std::invalid_argument("expected an integer, got empty string");
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(t.c_str(), &end, 10);
    if (errno != 0 || end != t.c_str() + t.size())
        throw std::invalid_argument("malformed integer: '" + text + "'");
    return v;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    for (const std::string& piece : split(text, ','))
        out.push_back(parse_real(piece));
    if (out.empty())
        throw std::invalid_argument("empty list: '" + text + "'");
    return out;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Parameter map with required/default accessors. Tracks what was consumed so
// unknown keys can be rejected, and records every resolved value (defaults
// included) so the CSV param_json column is self-describing.
class Params {
public:
    Params(const ExperimentConfig& config) : config_(config) {}

    bool has(const std::string& key) const { return config_.params.count(key) > 0; }

    std::string str(const std::string& key) {
        auto it = config_.params.find(key);
        if (it == config_.params.end())
            throw std::invalid_argument("missing required parameter --" + key);
        resolved_[key] = it->second;
        return it->second;
    }
    std::string str(const std::string& key, const std::string& fallback) {
        auto it = config_.params.find(key);
        std::string value = it == config_.params.end() ? fallback : it->second;
        resolved_[key] = value;
        return value;
    }
    double real(const std::string& key) { return parse_real(str(key)); }
    double real(const std::string& key, double fallback) {
        if (has(key))
            return parse_real(str(key));
        resolved_[key] = format_real(fallback);
        return fallback;
    }
    long long integer(const std::string& key, long long fallback) {
        if (has(key))
            return parse_int(str(key));
        resolved_[key] = std::to_string(fallback);
        return fallback;
    }
    std::vector<double> real_list(const std::string& key) { return parse_real_list(str(key)); }
    std::vector<double> real_list(const std::string& key, const std::string& fallback) {
        return parse_real_list(str(key, fallback));
    }

    void reject_unknown() const {
        for (const auto& [key, value] : config_.params)
            if (!resolved_.count(key))
                throw std::invalid_argument("unknown parameter --" + key + " for subcommand "
                                            + config_.subcommand);
    }

    const std::map<std::string, std::string>& resolved() const { return resolved_; }

private:
    const ExperimentConfig& config_;
    std::map<std::string, std::string> resolved_;
};

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += "\"";
    return out;
}

std::string format_index(const std::vector<int>& index) {
    std::string out;
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (i)
            out += ';';
        out += std::to_string(index[i]);
    }
    return out;
}

std::string render_csv(const std::string& experiment, const json& params,
                       const CorrelationReport& report) {
    std::string param_field = csv_quote(params.dump());
    std::string out = "experiment,param_json,n_index,estimate,exact,std_error,z_score\n";
    for (const ReportEntry& e : report.entries) {
        out += experiment;
        out += ',';
        out += param_field;
        out += ',';
        out += format_index(e.index);
        out += ',';
        out += format_real(e.estimate);
        out += ',';
        out += format_real(e.exact);
        out += ',';
        out += format_real(e.std_error);
        out += ',';
        out += format_real(e.z_score);
        out += '\n';
    }
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        std::cout.flush();
        return;
    }
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open output file: " + tmp.string());
        out << content;
        if (!out)
            throw std::runtime_error("failed writing output file: " + tmp.string());
    }
    fs::rename(tmp, target);
}

json report_params(const ExperimentConfig& config, const Params& params) {
    json j = json::object();
    for (const auto& [key, value] : params.resolved())
        if (!value.empty())
            j[key] = value;
    j["seed"] = std::to_string(config.seed);
    j["samples"] = std::to_string(config.samples);
    return j;
}

ReportEntry analytic_entry(std::vector<int> index, double estimate, double exact,
                           double tolerance) {
    return {std::move(index), estimate, exact, tolerance,
            z_score(estimate, exact, tolerance)};
}

// ---------------------------------------------------------------------------
// shared builders

PartitionSpec partition_from(Params& p, const std::string& fallback_alpha = "1") {
    std::vector<double> alphas = p.real_list("alpha", fallback_alpha);
    double sum = 0.0;
    for (double a : alphas)
        sum += a;
    double c = p.real("c", sum);
    return PartitionSpec(std::move(alphas), c);
}

BaseDistribution base_from(Params& p, const std::string& support_key,
                           const std::string& weight_key) {
    std::vector<double> support = p.real_list(support_key);
    std::vector<double> weights;
    if (p.has(weight_key)) {
        weights = p.real_list(weight_key);
        if (weights.size() != support.size())
            throw std::invalid_argument(support_key + " and " + weight_key
                                        + " must have the same length");
    } else {
        p.str(weight_key, "");
        weights.assign(support.size(), 1.0 / static_cast<double>(support.size()));
    }
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < support.size(); ++i)
        atoms.push_back({support[i], weights[i]});
    return BaseDistribution(std::move(atoms));
}

std::vector<CorrelationIndex> parse_indices(const std::string& text, std::size_t dim) {
    std::vector<CorrelationIndex> out;
    for (const std::string& group : split(text, ';')) {
        std::vector<std::string> parts = split(group, ',');
        if (dim == 1) {
            for (const std::string& piece : parts)
                out.push_back(CorrelationIndex({static_cast<int>(parse_int(piece))}));
        } else {
            if (parts.size() != dim)
                throw std::invalid_argument("index '" + group + "' does not match dimension "
                                            + std::to_string(dim));
            std::vector<int> idx;
            for (const std::string& piece : parts)
                idx.push_back(static_cast<int>(parse_int(piece)));
            out.push_back(CorrelationIndex(std::move(idx)));
        }
    }
    if (out.empty())
        throw std::invalid_argument("empty index list");
    return out;
}

DirectingKernel kernel_from(Params& p, const PartitionSpec& part) {
    std::string name = p.str("kernel", "degenerate");
    if (name == "degenerate")
        return DegenerateConstant{p.real("z")};
    if (name == "percell") {
        BaseDistribution base = base_from(p, "z-support", "z-weights");
        std::vector<BaseDistribution> bases(part.dim(), base);
        return PerCellDistribution{std::move(bases)};
    }
    if (name == "random")
        return RandomConstant{base_from(p, "z-support", "z-weights")};
    if (name == "beta")
        return RandomConstant{BetaLaw{p.real("beta-a"), p.real("beta-b")}};
    if (name == "common")
        return CommonComponent{p.real("eta")};
    throw std::invalid_argument("unknown kernel '" + name + "'");
}

// ---------------------------------------------------------------------------
// subcommands

CorrelationReport run_orthogonality(const ExperimentConfig& config, Params& p) {
    double alpha = p.real("alpha", 1.0);
    int max_degree = static_cast<int>(p.integer("max-degree", 10));
    if (max_degree < 0 || max_degree > 60)
        throw std::invalid_argument("max-degree must be in [0, 60]");
    const double tol_scale = 1e-8;
    QuadratureRule rule = gauss_laguerre(2 * max_degree + 4, alpha);

    CorrelationReport report;
    report.gate = 1.0;
    report.sample_count = static_cast<long long>(rule.nodes.size());
    report.seed = config.seed;
    std::vector<std::vector<double>> values(rule.nodes.size());
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        values[k].resize(max_degree + 1);
        for (int n = 0; n <= max_degree; ++n)
            values[k][n] = laguerre_tilde(PolyIndex(n, alpha), rule.nodes[k]);
    }
    for (int n = 0; n <= max_degree; ++n) {
        for (int m = n; m <= max_degree; ++m) {
            double q = 0.0;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k)
                q += rule.weights[k] * values[k][n] * values[k][m];
            double exact = (n == m) ? laguerre_norm(PolyIndex(n, alpha)) : 0.0;
            double tol = tol_scale * std::exp(0.5 * (log_laguerre_norm(PolyIndex(n, alpha))
                                                     + log_laguerre_norm(PolyIndex(m, alpha))));
            report.entries.push_back(analytic_entry({n, m}, q, exact, tol));
        }
    }
    return report;
}

CorrelationReport run_genfun_check(const ExperimentConfig& config, Params& p) {
    double alpha = p.real("alpha", 1.0);
    std::vector<double> rs = p.real_list("r", "-0.5,-0.25,0.25,0.5");
    std::vector<double> xs = p.real_list("x", "0,1,2.5,5,10");
    int n_terms = static_cast<int>(p.integer("n-terms", 60));
    for (double r : rs)
        if (std::fabs(r) >= 1.0)
            throw std::invalid_argument("generating function requires |r| < 1");

    CorrelationReport report;
    report.gate = 1.0;
    report.seed = config.seed;
    report.sample_count = n_terms;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            double partial = laguerre_genfun_partial(alpha, rs[i], xs[j], n_terms);
            double closed = std::pow(1.0 + rs[i], -alpha)
                          * std::exp(xs[j] * rs[i] / (1.0 + rs[i]));
            report.entries.push_back(analytic_entry({static_cast<int>(i), static_cast<int>(j)},
                                                    partial, closed, 1e-8));
        }
    }
    return report;
}

CorrelationReport run_pair_corr(const ExperimentConfig& config, Params& p) {
    std::string sampler = p.str("sampler");
    PartitionSpec part = partition_from(p);
    const std::size_t d = part.dim();

    PairSampler draw;
    DirectingKernel kernel = DegenerateConstant{0.0};
    if (sampler == "a1") {
        if (d != 1)
            throw std::invalid_argument("sampler a1 is one-dimensional");
        double b = p.real("b");
        kernel = DegenerateConstant{b / (1.0 + b)};
        double alpha = part.alphas[0];
        draw = [alpha, b](RandomStream& rng) {
            auto [x, y] = algorithm_a1(alpha, b, rng);
            return std::make_pair(std::vector<double>{x}, std::vector<double>{y});
        };
    } else if (sampler == "a2") {
        double b = p.real("b");
        kernel = DegenerateConstant{b / (1.0 + b)};
        std::vector<double> bvec(d, b);
        draw = [part, bvec](RandomStream& rng) {
            return algorithm_a2(part, [&bvec](RandomStream&) { return bvec; }, rng);
        };
    } else if (sampler == "a3") {
        double b = p.real("b");
        kernel = DegenerateConstant{b / (1.0 + b)};
        draw = [part, b](RandomStream& rng) {
            std::vector<double> x = sample_gamma_vector(part, rng);
            std::vector<double> y = algorithm_a3(b, x, part, rng);
            return std::make_pair(std::move(x), std::move(y));
        };
    } else if (sampler == "a4") {
        BaseDistribution pz = base_from(p, "z-support", "z-weights");
        kernel = RandomConstant{pz};
        draw = [part, pz](RandomStream& rng) {
            std::vector<double> x = sample_gamma_vector(part, rng);
            std::vector<double> y = algorithm_a4(pz, x, part, rng);
            return std::make_pair(std::move(x), std::move(y));
        };
    } else if (sampler == "dw") {
        double z = p.real("z");
        kernel = DegenerateConstant{z};
        draw = [part, z](RandomStream& rng) {
            std::vector<double> x = sample_gamma_vector(part, rng);
            std::vector<double> y = dw_transition_step(x, z, part, rng);
            return std::make_pair(std::move(x), std::move(y));
        };
    } else if (sampler == "general") {
        kernel = kernel_from(p, part);
        DirectingKernel k = kernel;
        draw = [part, k](RandomStream& rng) { return sample_pair_general(part, k, rng); };
    } else {
        throw std::invalid_argument("unknown sampler '" + sampler + "'");
    }

    std::vector<CorrelationIndex> indices = parse_indices(p.str("n"), d);
    std::vector<double> exact;
    for (const CorrelationIndex& idx : indices)
        exact.push_back(canonical_corr_exact(part, kernel, idx));

    PairBatch batch = make_pair_batch(static_cast<std::size_t>(config.samples), d, config.seed,
                                      "pair-corr " + sampler, draw);
    CorrelationReport report = correlation_report(batch, part, indices, exact);
    return report;
}

CorrelationReport run_merge_check(const ExperimentConfig& config, Params& p) {
    PartitionSpec part = partition_from(p, "1,1");
    if (part.dim() != 2)
        throw std::invalid_argument("merge-check expects exactly two cells");
    DirectingKernel kernel = kernel_from(p, part);
    int n_max = static_cast<int>(p.integer("n-max", 6));

    auto [merged_part, merged_kernel] = merged_cell(part, kernel, 0, 1);
    CorrelationReport report;
    report.gate = 1.0;
    report.seed = config.seed;
    report.sample_count = n_max + 1;
    for (int n = 0; n <= n_max; ++n) {
        double mixture = merge_corr(part, kernel, n, 0, 1);
        double exact = canonical_corr_exact(merged_part, merged_kernel,
                                            CorrelationIndex({n}));
        report.entries.push_back(analytic_entry({n}, mixture, exact,
                                                1e-10 * std::max(std::fabs(exact), 1e-30)));
    }
    return report;
}

CorrelationReport run_dirichlet_moments(const ExperimentConfig& config, Params& p) {
    double theta = p.real("theta");
    BaseDistribution base = base_from(p, "support", "weights");
    DirichletMeanSpec spec(theta, base);
    int n_max = static_cast<int>(p.integer("n-max", 5));
    std::vector<double> exact = mean_moments(spec, n_max);

    std::string bell = p.str("bell", "");
    if (!bell.empty()) {
        BellWeighting weighting;
        if (bell == "cyclic")
            weighting = BellWeighting::Cyclic;
        else if (bell == "factorial")
            weighting = BellWeighting::Factorial;
        else
            throw std::invalid_argument("bell must be 'cyclic' or 'factorial'");
        std::vector<double> via_bell = mean_moments_bell(spec, n_max, weighting);
        CorrelationReport report;
        report.gate = 1.0;
        report.seed = config.seed;
        report.sample_count = n_max;
        for (int n = 1; n <= n_max; ++n)
            report.entries.push_back(analytic_entry({n}, via_bell[n - 1], exact[n - 1],
                                                    1e-10 * std::max(exact[n - 1], 1e-30)));
        return report;
    }

    double eps = p.real("eps", 1e-10);
    RandomStream rng(config.seed);
    std::vector<double> draws(static_cast<std::size_t>(config.samples));
    for (double& v : draws)
        v = sample_dirichlet_mean(spec, eps, rng);
    CorrelationReport report = moment_match_report(draws, exact, n_max);
    report.seed = config.seed;
    return report;
}

CorrelationReport run_stieltjes_check(const ExperimentConfig& config, Params& p) {
    double theta = p.real("theta");
    BaseDistribution base = base_from(p, "support", "weights");
    DirichletMeanSpec spec(theta, base);
    double lambda = p.real("lambda");
    RandomStream rng(config.seed);
    StieltjesGap gap = stieltjes_identity_gap(spec, lambda, rng, config.samples);

    CorrelationReport report;
    report.seed = config.seed;
    report.sample_count = config.samples;
    report.gate = 5.0;
    report.entries.push_back({{1}, gap.lhs, gap.rhs, gap.lhs_se,
                              z_score(gap.lhs, gap.rhs, gap.lhs_se)});
    return report;
}

CorrelationReport run_density_check(const ExperimentConfig& config, Params& p) {
    double alpha = p.real("alpha", 1.0);
    std::vector<double> zs = p.real_list("z", "0.2,0.5,0.8");
    double grid_max = p.real("grid-max", 40.0);
    int panels = static_cast<int>(p.integer("panels", 40));
    int points = static_cast<int>(p.integer("points", 16));
    QuadratureRule rule = composite_legendre(0.0, grid_max, panels, points);
    const std::size_t nq = rule.nodes.size();

    PolyIndex one(1, alpha);
    double c1 = laguerre_norm(one);
    std::vector<double> l1(nq);
    for (std::size_t i = 0; i < nq; ++i)
        l1[i] = laguerre_tilde(one, rule.nodes[i]);

    CorrelationReport report;
    report.gate = 1.0;
    report.seed = config.seed;
    report.sample_count = static_cast<long long>(nq * nq);
    for (std::size_t iz = 0; iz < zs.size(); ++iz) {
        double z = zs[iz];
        double mass = 0.0, mixed = 0.0;
        for (std::size_t i = 0; i < nq; ++i) {
            double row_mass = 0.0, row_mixed = 0.0;
            for (std::size_t j = 0; j < nq; ++j) {
                double f = extreme_pair_density(rule.nodes[i], rule.nodes[j], z, alpha);
                double wf = rule.weights[j] * f;
                row_mass += wf;
                row_mixed += wf * l1[j];
            }
            mass += rule.weights[i] * row_mass;
            mixed += rule.weights[i] * l1[i] * row_mixed;
        }
        report.entries.push_back(analytic_entry({static_cast<int>(iz), 0}, mass, 1.0, 1e-6));
        report.entries.push_back(analytic_entry({static_cast<int>(iz), 1}, mixed / c1, z, 1e-6));
    }
    return report;
}

CorrelationReport run_laplace_ratio(const ExperimentConfig& config, Params& p) {
    PartitionSpec part = partition_from(p);
    const std::size_t d = part.dim();
    std::vector<double> s = p.real_list("s");
    std::vector<double> t = p.real_list("t");
    if (s.size() != d || t.size() != d)
        throw std::invalid_argument("s and t must match the partition dimension");
    int trunc = static_cast<int>(p.integer("trunc", 120));

    std::string name = p.str("kernel", "degenerate");
    DirectingKernel kernel = DegenerateConstant{0.0};
    double closed = 1.0;
    std::vector<double> theta(d);
    for (std::size_t i = 0; i < d; ++i)
        theta[i] = s[i] * t[i] / ((1.0 + s[i]) * (1.0 + t[i]));
    if (name == "degenerate") {
        double z = p.real("z");
        kernel = DegenerateConstant{z};
        for (std::size_t i = 0; i < d; ++i)
            closed *= std::pow(1.0 - z * theta[i], -part.alphas[i]);
    } else if (name == "common") {
        double eta = p.real("eta");
        kernel = CommonComponent{eta};
        for (std::size_t i = 0; i < d; ++i)
            closed *= std::pow(1.0 - theta[i], -eta * part.alphas[i]);
    } else {
        throw std::invalid_argument("laplace-ratio supports kernels 'degenerate' and 'common'");
    }

    double series = joint_laplace_ratio(part, kernel, s, t, trunc);
    CorrelationReport report;
    report.gate = 1.0;
    report.seed = config.seed;
    report.sample_count = trunc;
    report.entries.push_back(analytic_entry({0}, series, closed, 1e-8 * std::fabs(closed)));
    return report;
}

SubordinatorSpec subordinator_from(Params& p) {
    double drift = p.real("drift", 0.0);
    double rate = p.real("rate", 0.0);
    if (rate > 0.0) {
        BaseDistribution jumps = base_from(p, "jump", "jump-weights");
        return SubordinatorSpec(drift, rate, jumps);
    }
    p.str("jump", "");
    p.str("jump-weights", "");
    return SubordinatorSpec::pure_drift(drift);
}

CorrelationReport run_subordinate(const ExperimentConfig& config, Params& p) {
    PartitionSpec part = partition_from(p);
    const std::size_t d = part.dim();
    SubordinatorSpec spec = subordinator_from(p);
    double t = p.real("t", 1.0);
    if (!(t > 0.0))
        throw std::invalid_argument("t must be positive");

    std::vector<CorrelationIndex> indices;
    if (p.has("n")) {
        indices = parse_indices(p.str("n"), d);
    } else {
        p.str("n", "");
        int n_max = static_cast<int>(p.integer("n-max", 2));
        if (d != 1)
            throw std::invalid_argument("multi-cell subordinate runs need an explicit --n list");
        for (int n = 1; n <= n_max; ++n)
            indices.push_back(CorrelationIndex({n}));
    }
    p.integer("n-max", 2);

    std::vector<double> exact;
    for (const CorrelationIndex& idx : indices)
        exact.push_back(markov_corr(spec, idx, t));

    auto single_draw = [&part, &spec, t](RandomStream& rng) {
        std::vector<double> x = sample_gamma_vector(part, rng);
        std::vector<double> y = subordinated_dw_step(x, part, spec, t, rng);
        return std::make_pair(std::move(x), std::move(y));
    };
    PairBatch batch = make_pair_batch(static_cast<std::size_t>(config.samples), d, config.seed,
                                      "subordinate", single_draw);
    CorrelationReport report = correlation_report(batch, part, indices, exact);
    for (ReportEntry& e : report.entries)
        e.index.insert(e.index.begin(), 0); // {0, n...}: single step vs exact

    if (p.has("chain-split")) {
        double t1 = p.real("chain-split");
        if (!(t1 > 0.0) || !(t1 < t))
            throw std::invalid_argument("chain-split must lie strictly inside (0, t)");
        auto chained_draw = [&part, &spec, t, t1](RandomStream& rng) {
            std::vector<double> x = sample_gamma_vector(part, rng);
            std::vector<double> mid = subordinated_dw_step(x, part, spec, t1, rng);
            std::vector<double> y = subordinated_dw_step(mid, part, spec, t - t1, rng);
            return std::make_pair(std::move(x), std::move(y));
        };
        PairBatch chained = make_pair_batch(static_cast<std::size_t>(config.samples), d,
                                            config.seed + 1, "subordinate chained", chained_draw);
        CorrelationReport chain_rep = correlation_report(chained, part, indices, exact);
        for (std::size_t k = 0; k < indices.size(); ++k) {
            const ReportEntry& a = chain_rep.entries[k];
            const ReportEntry& b = report.entries[k];
            double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
            ReportEntry cmp{indices[k].n, a.estimate, b.estimate, se,
                            z_score(a.estimate, b.estimate, se)};
            cmp.index.insert(cmp.index.begin(), 1); // {1, n...}: chained vs single
            report.entries.push_back(std::move(cmp));
        }
    } else {
        p.str("chain-split", "");
    }
    report.gate = mc_gate(report.entries.size());
    return report;
}

CorrelationReport run_poisson_embed(const ExperimentConfig& config, Params& p) {
    double gamma_rate = p.real("gamma-rate");
    double rho1 = p.real("rho1");
    double t = p.real("t", 1.0);
    double alpha = p.real("alpha", 1.0);
    PartitionSpec part({alpha}, alpha);
    std::vector<CorrelationIndex> indices = parse_indices(p.str("n", "1,2"), 1);

    std::vector<double> exact;
    for (const CorrelationIndex& idx : indices)
        exact.push_back(poissonized_corr(gamma_rate, rho1, idx.n[0], t));

    auto draw = [&part, gamma_rate, rho1, t](RandomStream& rng) {
        std::vector<double> x = sample_gamma_vector(part, rng);
        std::vector<double> y = x;
        long long steps = draw_poisson(gamma_rate * t, rng);
        for (long long k = 0; k < steps; ++k) {
            if (rho1 >= 1.0)
                continue; // identity chain
            if (rho1 <= 0.0)
                y = algorithm_a3(0.0, y, part, rng);
            else
                y = dw_transition_step(y, rho1, part, rng);
        }
        return std::make_pair(std::move(x), std::move(y));
    };
    PairBatch batch = make_pair_batch(static_cast<std::size_t>(config.samples), 1, config.seed,
                                      "poisson-embed", draw);
    return correlation_report(batch, part, indices, exact);
}

using Runner = std::function<CorrelationReport(const ExperimentConfig&, Params&)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
    static const std::vector<std::pair<std::string, Runner>> table = {
        {"orthogonality", run_orthogonality},
        {"genfun-check", run_genfun_check},
        {"pair-corr", run_pair_corr},
        {"merge-check", run_merge_check},
        {"dirichlet-moments", run_dirichlet_moments},
        {"stieltjes-check", run_stieltjes_check},
        {"density-check", run_density_check},
        {"laplace-ratio", run_laplace_ratio},
        {"subordinate", run_subordinate},
        {"poisson-embed", run_poisson_embed},
    };
    return table;
}

} // namespace

double parse_real(const std::string& text) {
    std::string t = trim(text);
    if (t.empty())
        throw std::invalid_argument("expected a number, got empty string");
    if (t.rfind("log", 0) == 0)
        return std::log(parse_real(t.substr(3)));
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (errno != 0 || end != t.c_str() + t.size() || !std::isfinite(v))
        throw std::invalid_argument("malformed number: '" + text + "'");
    return v;
}

std::vector<std::string> subcommand_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry())
        names.push_back(name);
    return names;
}

ExperimentConfig parse_command_line(const std::vector<std::string>& args) {
    if (args.empty())
        throw std::invalid_argument("usage: <subcommand> [--key value ...]");
    ExperimentConfig config;
    config.subcommand = args[0];
    if (config.subcommand.rfind("--", 0) == 0)
        throw std::invalid_argument("expected a subcommand before flags");

    std::map<std::string, std::string> flags;
    for (std::size_t i = 1; i < args.size(); ++i) {
        std::string key = args[i];
        if (key.rfind("--", 0) != 0)
            throw std::invalid_argument("expected a --flag, got '" + key + "'");
        key = key.substr(2);
        std::string value;
        std::size_t eq = key.find('=');
        if (eq != std::string::npos) {
            value = key.substr(eq + 1);
            key = key.substr(0, eq);
        } else {
            if (i + 1 >= args.size())
                throw std::invalid_argument("flag --" + key + " is missing a value");
            value = args[++i];
        }
        if (key.empty())
            throw std::invalid_argument("empty flag name");
        flags[key] = value;
    }

    std::map<std::string, std::string> merged;
    if (auto it = flags.find("config"); it != flags.end()) {
        std::ifstream in(it->second);
        if (!in)
            throw std::invalid_argument("cannot read config file: " + it->second);
        std::string line;
        while (std::getline(in, line)) {
            std::string stripped = trim(line);
            if (stripped.empty() || stripped[0] == '#')
                continue;
            std::size_t eq = stripped.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config line is not key=value: '" + line + "'");
            merged[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
        }
        flags.erase(it);
    }
    for (const auto& [key, value] : flags) // explicit flags win
        merged[key] = value;

    if (auto it = merged.find("seed"); it != merged.end()) {
        config.seed = static_cast<std::uint64_t>(parse_int(it->second));
        merged.erase(it);
    } else if (const char* env = std::getenv("GCRM_SEED")) {
        config.seed = static_cast<std::uint64_t>(parse_int(env));
    }
    if (auto it = merged.find("samples"); it != merged.end()) {
        config.samples = parse_int(it->second);
        if (config.samples < 1)
            throw std::invalid_argument("samples must be >= 1");
        merged.erase(it);
    }
    if (auto it = merged.find("out"); it != merged.end()) {
        config.output_path = it->second;
        merged.erase(it);
    }
    config.params = std::move(merged);
    return config;
}

int run(const ExperimentConfig& config) {
    const Runner* runner = nullptr;
    for (const auto& [name, fn] : registry())
        if (name == config.subcommand)
            runner = &fn;
    if (runner == nullptr) {
        std::cerr << "error: unknown subcommand '" << config.subcommand << "'\n";
        return kExitConfigError;
    }
    try {
        Params params(config);
        CorrelationReport report = (*runner)(config, params);
        params.reject_unknown();
        write_output(config.output_path,
                     render_csv(config.subcommand, report_params(config, params), report));
        return report.passes() ? kExitPass : kExitGateFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

} // namespace gcrm::cli
