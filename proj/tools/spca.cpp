// spca: sparse principal component analysis via ADMM on the SDP relaxation.
//
// Subcommands:
//   solve      one sparse PC from a covariance (or data) file
//   multi      several PCs via sequential deflation
//   synth      synthetic covariance generators
//   project2d  least-squares 2-D projection of data columns onto two loadings
//   bench      seeded spiked-model benchmark grid

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spca/data.hpp"
#include "spca/deflation.hpp"
#include "spca/solver.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;

struct OutputOptions {
    std::string path;     // empty: stdout
    std::string format = "json";
    bool no_timestamp = false;
};

std::string iso_timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&now));
    return buf;
}

void write_text(const OutputOptions& out, const std::string& text) {
    if (out.path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out.path);
    if (!f) throw spca::Error("cannot write output file '" + out.path + "'");
    f << text;
}

std::string format_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", s);
    return buf;
}

// Reproducible-output mode: --no-timestamp drops the timestamp and zeroes
// wall-clock fields so identical runs produce byte-identical files.
double reported_seconds(const OutputOptions& out, double seconds) {
    return out.no_timestamp ? 0.0 : seconds;
}

struct SolveFlags {
    std::string formulation = "constrained";
    std::vector<double> k;
    std::vector<double> rho;
    double mu0 = 0.8;
    double cont_factor = 0.0;   // 0: continuation off
    double cont_floor = 1e-4;
    double tol = 1e-4;
    int max_iters = 5000;
};

void add_solver_flags(CLI::App* cmd, SolveFlags& f, double default_mu0, double default_factor) {
    f.mu0 = default_mu0;
    f.cont_factor = default_factor;
    cmd->add_option("--formulation", f.formulation, "constrained or penalized")
        ->check(CLI::IsMember({"constrained", "penalized"}));
    cmd->add_option("--k", f.k, "l1 radius K (one per component for multi)");
    cmd->add_option("--rho", f.rho, "l1 penalty rho (one per component for multi)");
    cmd->add_option("--mu0", f.mu0, "initial ADMM penalty parameter");
    cmd->add_option("--cont-factor", f.cont_factor, "continuation decay factor in (0,1); 0 disables");
    cmd->add_option("--cont-floor", f.cont_floor, "continuation floor for mu");
    cmd->add_option("--tol", f.tol, "relative-gap stopping tolerance");
    cmd->add_option("--max-iters", f.max_iters, "ADMM iteration cap");
}

spca::SolverConfig make_config(const SolveFlags& f) {
    spca::SolverConfig cfg;
    cfg.mu0 = f.mu0;
    cfg.tol = f.tol;
    cfg.max_iters = f.max_iters;
    if (f.cont_factor > 0.0) cfg.continuation = spca::ContinuationSchedule{f.cont_factor, f.cont_floor};
    return cfg;
}

std::vector<spca::Formulation> make_formulations(const SolveFlags& f, size_t count_hint) {
    std::vector<spca::Formulation> fs;
    if (f.formulation == "constrained") {
        if (f.k.empty()) throw spca::Error("--k is required for the constrained formulation");
        for (double k : f.k) fs.push_back(spca::Formulation::constrained(k));
    } else {
        if (f.rho.empty()) throw spca::Error("--rho is required for the penalized formulation");
        for (double r : f.rho) fs.push_back(spca::Formulation::penalized(r));
    }
    if (count_hint > 0 && fs.size() != count_hint)
        throw spca::Error("parameter list length does not match the requested component count");
    return fs;
}

struct InputFlags {
    std::string path;
    bool as_data = false;        // dense p x n data matrix, covariance formed as M M'
    bool center = false;
    bool triplet = false;        // sparse "row,col,value" data file
    bool triplet_header = false; // first triplet line is "p,n"
    int p = -1, n = -1;
};

void add_input_flags(CLI::App* cmd, InputFlags& in) {
    cmd->add_option("--input", in.path, "covariance CSV, data CSV (--data) or triplets (--triplet)")
        ->required();
    cmd->add_flag("--data", in.as_data, "treat input as a dense p x n data matrix");
    cmd->add_flag("--center", in.center, "subtract row means before forming M M'");
    cmd->add_flag("--triplet", in.triplet, "treat input as a sparse row,col,value data file");
    cmd->add_flag("--triplet-header", in.triplet_header, "first triplet line holds 'p,n'");
    cmd->add_option("--p", in.p, "rows (variables) for --triplet");
    cmd->add_option("--n", in.n, "cols (samples) for --triplet");
}

spca::SymMatrix load_input_covariance(const InputFlags& in) {
    if (in.triplet)
        return spca::covariance_from_data(
            spca::load_triplets(in.path, in.p, in.n, in.triplet_header), in.center);
    if (in.as_data) return spca::covariance_from_data(spca::load_data_csv(in.path), in.center);
    return spca::load_covariance_csv(in.path);
}

json loading_to_json(const spca::Vector& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

// ---------------------------------------------------------------- solve ---

int run_solve(const InputFlags& in, const SolveFlags& flags, const OutputOptions& out) {
    const spca::SymMatrix sigma = load_input_covariance(in);
    const auto fs = make_formulations(flags, 1);
    const auto t0 = std::chrono::steady_clock::now();
    const spca::SolveReport report = spca::solve(sigma, fs[0], make_config(flags));
    const spca::Loading pc = spca::extract_loading(report.y_final);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double pev_pct = 100.0 * spca::quadratic_form(sigma, pc.loading) / spca::trace(sigma);

    if (out.format == "json") {
        json j{{"command", "solve"},
               {"cardinality", pc.cardinality},
               {"pev_pct", pev_pct},
               {"iterations", report.iterations},
               {"converged", report.converged},
               {"rel_gap", report.rel_gap},
               {"objective", report.objective},
               {"seconds", reported_seconds(out, seconds)},
               {"loading", loading_to_json(pc.loading)}};
        if (!out.no_timestamp) j["generated_at"] = iso_timestamp();
        write_text(out, j.dump(2) + "\n");
    } else {
        std::ostringstream csv;
        csv << "pc,card,pev_pct,iters,seconds\n";
        csv << "1," << pc.cardinality << ',' << pev_pct << ',' << report.iterations << ','
            << format_seconds(reported_seconds(out, seconds)) << '\n';
        csv << "index,loading\n";
        for (size_t i = 0; i < pc.loading.size(); ++i) csv << (i + 1) << ',' << pc.loading[i] << '\n';
        if (!out.no_timestamp) csv << "# generated_at=" << iso_timestamp() << '\n';
        write_text(out, csv.str());
    }
    return report.converged ? kExitOk : kExitNotConverged;
}

// ---------------------------------------------------------------- multi ---

int run_multi(const InputFlags& in, const SolveFlags& flags, const std::string& deflation,
              const OutputOptions& out) {
    const spca::SymMatrix sigma = load_input_covariance(in);
    const auto fs = make_formulations(flags, 0);
    const auto scheme = deflation == "hotelling" ? spca::DeflationScheme::Hotelling
                                                 : spca::DeflationScheme::SchurComplement;
    const auto t0 = std::chrono::steady_clock::now();
    const spca::MultiPcResult result = spca::solve_multi(sigma, fs, make_config(flags), scheme);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const double total_trace = spca::trace(sigma);
    bool all_converged = true;
    int total_card = 0;
    long total_iters = 0;
    std::vector<double> pev(fs.size());
    for (size_t j = 0; j < fs.size(); ++j) {
        pev[j] = 100.0 * spca::quadratic_form(sigma, result.loadings.col(static_cast<int>(j))) / total_trace;
        total_card += result.cardinalities[j];
        total_iters += result.per_pc_reports[j].iterations;
        all_converged = all_converged && result.per_pc_reports[j].converged;
    }
    // per-PC wall time is not tracked separately; the total is attributed
    // proportionally to iteration counts for the table
    const double total_seconds = reported_seconds(out, seconds);

    if (out.format == "json") {
        json pcs = json::array();
        for (size_t j = 0; j < fs.size(); ++j) {
            pcs.push_back(json{{"pc", j + 1},
                               {"card", result.cardinalities[j]},
                               {"pev_pct", pev[j]},
                               {"iters", result.per_pc_reports[j].iterations},
                               {"converged", result.per_pc_reports[j].converged},
                               {"loading", loading_to_json(result.loadings.col(static_cast<int>(j)))}});
        }
        json j{{"command", "multi"},
               {"pcs", pcs},
               {"totals",
                json{{"card", total_card},
                     {"adjusted_variance_pct", result.adjusted_variance_pct},
                     {"adjusted_variance", result.adjusted_variance},
                     {"iters", total_iters},
                     {"seconds", total_seconds}}}};
        if (!out.no_timestamp) j["generated_at"] = iso_timestamp();
        write_text(out, j.dump(2) + "\n");
    } else {
        std::ostringstream csv;
        csv << "pc,card,pev_pct,iters,seconds\n";
        for (size_t j = 0; j < fs.size(); ++j) {
            const double share = total_iters > 0
                                     ? total_seconds * result.per_pc_reports[j].iterations / total_iters
                                     : 0.0;
            csv << (j + 1) << ',' << result.cardinalities[j] << ',' << pev[j] << ','
                << result.per_pc_reports[j].iterations << ',' << format_seconds(share) << '\n';
        }
        csv << "total," << total_card << ',' << result.adjusted_variance_pct << ',' << total_iters
            << ',' << format_seconds(total_seconds) << '\n';
        if (!out.no_timestamp) csv << "# generated_at=" << iso_timestamp() << '\n';
        write_text(out, csv.str());
    }
    return all_converged ? kExitOk : kExitNotConverged;
}

// ---------------------------------------------------------------- synth ---

int run_synth(const std::string& kind, int p, int s, double noise_sigma, std::uint64_t seed,
              const std::string& support_output, const OutputOptions& out) {
    if (out.path.empty()) throw spca::Error("synth requires --output");
    if (kind == "zou") {
        spca::write_covariance_csv(out.path, spca::zou_covariance());
        return kExitOk;
    }
    const spca::SpikedInstance inst = spca::spiked_covariance(p, s, noise_sigma, seed);
    spca::write_covariance_csv(out.path, inst.sigma);
    if (!support_output.empty()) {
        std::ofstream f(support_output);
        if (!f) throw spca::Error("cannot write support file '" + support_output + "'");
        for (int idx : inst.support) f << idx << '\n';
    }
    return kExitOk;
}

// ------------------------------------------------------------ project2d ---

int run_project2d(const std::string& input, bool votes, bool labels, int filter_missing,
                  const std::string& loadings_path, bool use_pca, const OutputOptions& out) {
    spca::Matrix data;
    std::vector<std::string> label_row;
    if (votes) {
        spca::VotesData vd = spca::load_votes_csv(input, labels);
        data = filter_missing >= 0 ? spca::filter_bills(vd.votes, filter_missing) : vd.votes;
        label_row = std::move(vd.labels);
    } else {
        data = spca::load_data_csv(input);
    }

    spca::Vector v1, v2;
    if (use_pca) {
        const spca::SymMatrix sigma = spca::covariance_from_data(data, false);
        const spca::PcaResult pca = spca::standard_pca(sigma, 2);
        v1 = pca.components.col(0);
        v2 = pca.components.col(1);
    } else {
        if (loadings_path.empty()) throw spca::Error("project2d needs --loadings or --use-pca");
        const spca::Matrix lm = spca::load_data_csv(loadings_path);
        if (lm.rows() != 2 || lm.cols() != data.rows())
            throw spca::DimensionMismatch("loadings file must hold two rows of length p");
        v1 = spca::Vector(lm.row(0).begin(), lm.row(0).end());
        v2 = spca::Vector(lm.row(1).begin(), lm.row(1).end());
    }

    const auto points = spca::project_columns_2d(data, v1, v2);
    std::ostringstream csv;
    csv << "id,alpha,beta,label\n";
    for (size_t i = 0; i < points.size(); ++i) {
        csv << (i + 1) << ',' << points[i].first << ',' << points[i].second << ','
            << (i < label_row.size() ? label_row[i] : "") << '\n';
    }
    if (!out.no_timestamp) csv << "# generated_at=" << iso_timestamp() << '\n';
    write_text(out, csv.str());
    return kExitOk;
}

// ---------------------------------------------------------------- bench ---

struct BenchCell {
    int p, s;
    double sigma, k;
};

struct BenchRow {
    BenchCell cell;
    bool ok = false;
    std::string error;
    double med_card = 0, med_pev = 0, med_pca_pev = 0, med_seconds = 0;
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

BenchRow run_bench_cell(const BenchCell& cell, int runs, std::uint64_t seed_base,
                        const SolveFlags& flags) {
    BenchRow row{cell};
    try {
        std::vector<double> cards, pevs, pca_pevs, secs;
        for (int r = 0; r < runs; ++r) {
            const spca::SpikedInstance inst =
                spca::spiked_covariance(cell.p, cell.s, cell.sigma, seed_base + static_cast<std::uint64_t>(r));
            SolveFlags cell_flags = flags;
            cell_flags.k = {cell.k};
            cell_flags.rho = {cell.k};
            const auto fs = make_formulations(cell_flags, 1);
            const auto t0 = std::chrono::steady_clock::now();
            const spca::SolveReport report = spca::solve(inst.sigma, fs[0], make_config(cell_flags));
            const spca::Loading pc = spca::extract_loading(report.y_final);
            secs.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
            cards.push_back(pc.cardinality);
            const double tr = spca::trace(inst.sigma);
            pevs.push_back(100.0 * spca::quadratic_form(inst.sigma, pc.loading) / tr);
            pca_pevs.push_back(100.0 * spca::standard_pca(inst.sigma, 1).eigenvalues[0] / tr);
        }
        row.med_card = median(cards);
        row.med_pev = median(pevs);
        row.med_pca_pev = median(pca_pevs);
        row.med_seconds = median(secs);
        row.ok = true;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

int run_bench(const std::vector<int>& ps, const std::vector<int>& ss,
              const std::vector<double>& sigmas, const std::vector<double>& ks, int runs,
              std::uint64_t seed, const SolveFlags& flags, const OutputOptions& out) {
    std::vector<BenchCell> cells;
    for (int p : ps)
        for (int s : ss)
            for (double sg : sigmas)
                for (double k : ks) cells.push_back({p, s, sg, k});

    // independent cells run concurrently; rows are assembled by grid index
    std::vector<std::future<BenchRow>> futures;
    futures.reserve(cells.size());
    for (const BenchCell& c : cells)
        futures.push_back(std::async(std::launch::async, run_bench_cell, c, runs, seed, flags));

    std::ostringstream csv;
    csv << "p,s,sigma,k,runs,med_card,med_pev_pct,med_pca_pev_pct,med_seconds,status\n";
    json rows = json::array();
    for (auto& fut : futures) {
        const BenchRow row = fut.get();
        const double secs = reported_seconds(out, row.med_seconds);
        if (row.ok) {
            csv << row.cell.p << ',' << row.cell.s << ',' << row.cell.sigma << ',' << row.cell.k
                << ',' << runs << ',' << row.med_card << ',' << row.med_pev << ','
                << row.med_pca_pev << ',' << format_seconds(secs) << ",ok\n";
        } else {
            csv << row.cell.p << ',' << row.cell.s << ',' << row.cell.sigma << ',' << row.cell.k
                << ',' << runs << ",,,,," << "error: " << row.error << '\n';
        }
        rows.push_back(json{{"p", row.cell.p},
                            {"s", row.cell.s},
                            {"sigma", row.cell.sigma},
                            {"k", row.cell.k},
                            {"runs", runs},
                            {"med_card", row.med_card},
                            {"med_pev_pct", row.med_pev},
                            {"med_pca_pev_pct", row.med_pca_pev},
                            {"med_seconds", secs},
                            {"status", row.ok ? "ok" : "error: " + row.error}});
    }

    if (out.format == "json") {
        json j{{"command", "bench"}, {"rows", rows}};
        if (!out.no_timestamp) j["generated_at"] = iso_timestamp();
        write_text(out, j.dump(2) + "\n");
    } else {
        if (!out.no_timestamp) csv << "# generated_at=" << iso_timestamp() << '\n';
        write_text(out, csv.str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse PCA via ADMM on the l1 SDP relaxations"};
    app.require_subcommand(1);

    OutputOptions out;
    app.add_option("--output", out.path, "output file (stdout when omitted)");
    app.add_option("--format", out.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--no-timestamp", out.no_timestamp,
                 "reproducible output: no timestamp, wall-clock fields zeroed");

    auto* solve_cmd = app.add_subcommand("solve", "extract one sparse PC");
    InputFlags solve_in;
    add_input_flags(solve_cmd, solve_in);
    SolveFlags solve_flags;
    add_solver_flags(solve_cmd, solve_flags, 0.8, 0.0);

    auto* multi_cmd = app.add_subcommand("multi", "extract several sparse PCs with deflation");
    InputFlags multi_in;
    add_input_flags(multi_cmd, multi_in);
    SolveFlags multi_flags;
    add_solver_flags(multi_cmd, multi_flags, 0.8, 0.0);
    std::string deflation = "schur";
    multi_cmd->add_option("--deflation", deflation, "schur or hotelling")
        ->check(CLI::IsMember({"schur", "hotelling"}));

    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic covariance");
    std::string synth_kind = "spiked";
    int synth_p = 100, synth_s = 10;
    double synth_noise = 0.01;
    std::uint64_t seed = 1;
    std::string support_output;
    synth_cmd->add_option("--kind", synth_kind, "zou or spiked")
        ->check(CLI::IsMember({"zou", "spiked"}));
    synth_cmd->add_option("--p", synth_p, "dimension");
    synth_cmd->add_option("--s", synth_s, "spike sparsity");
    synth_cmd->add_option("--noise-sigma", synth_noise, "noise level");
    synth_cmd->add_option("--seed", seed, "RNG seed");
    synth_cmd->add_option("--support-output", support_output, "write spike support indices here");

    auto* proj_cmd = app.add_subcommand("project2d", "project data columns onto two loadings");
    std::string proj_input;
    proj_cmd->add_option("--input", proj_input, "data CSV or votes CSV")->required();
    bool votes = false, labels = false, use_pca = false;
    int filter_missing = -1;
    std::string loadings_path;
    proj_cmd->add_flag("--votes", votes, "input is a votes matrix in {-1,0,1}");
    proj_cmd->add_flag("--labels", labels, "votes file starts with a label row");
    proj_cmd->add_option("--filter-missing", filter_missing,
                         "keep bills with at most this many missing votes");
    proj_cmd->add_option("--loadings", loadings_path, "CSV with two loading rows");
    proj_cmd->add_flag("--use-pca", use_pca, "use the top two standard PCs as the basis");

    auto* bench_cmd = app.add_subcommand("bench", "spiked-model benchmark grid");
    std::vector<int> bench_p{100}, bench_s{10};
    std::vector<double> bench_sigma{0.01}, bench_k{5.0};
    int bench_runs = 10;
    bench_cmd->add_option("--p", bench_p, "dimensions");
    bench_cmd->add_option("--s", bench_s, "spike sparsities");
    bench_cmd->add_option("--sigma", bench_sigma, "noise levels");
    bench_cmd->add_option("--k-grid", bench_k, "constraint radii");
    bench_cmd->add_option("--runs", bench_runs, "seeded runs per cell")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", seed, "base seed; run r uses seed + r");
    SolveFlags bench_flags;
    add_solver_flags(bench_cmd, bench_flags, 1.0, 2.0 / 3.0);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return run_solve(solve_in, solve_flags, out);
        if (multi_cmd->parsed()) return run_multi(multi_in, multi_flags, deflation, out);
        if (synth_cmd->parsed())
            return run_synth(synth_kind, synth_p, synth_s, synth_noise, seed, support_output, out);
        if (proj_cmd->parsed())
            return run_project2d(proj_input, votes, labels, filter_missing, loadings_path, use_pca, out);
        if (bench_cmd->parsed())
            return run_bench(bench_p, bench_s, bench_sigma, bench_k, bench_runs, seed, bench_flags, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}
