#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "greenpath/covering.hpp"
#include "greenpath/expressions.hpp"
#include "greenpath/kernels.hpp"
#include "greenpath/montecarlo.hpp"
#include "greenpath/quadrature.hpp"
#include "greenpath/solver.hpp"
#include "greenpath/verify.hpp"

namespace greenpath::cli {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument("bad number '" + tok + "'");
    }
    return out;
}

Point parse_point(const std::string& text) {
    const std::vector<double> xs = parse_csv_doubles(text);
    return Point::of(xs);
}

// Output target: path or stdout.
struct Sink {
    std::ofstream file;
    std::ostream* stream = &std::cout;
    void open(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw std::ios_base::failure("cannot open output file '" + path + "'");
        stream = &file;
    }
    std::ostream& out() { return *stream; }
};

// ---------------------------------------------------------------------------
// Problem files: "key = value" lines, # comments.
// ---------------------------------------------------------------------------
struct ProblemFile {
    BoundaryValueProblem bvp;
    int dim = 0;
};

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open problem file '" + path + "'");
    ProblemFile prob;
    std::optional<double> support_radius;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto from = s.find_first_not_of(" \t\r");
        const auto to = s.find_last_not_of(" \t\r");
        return from == std::string::npos ? std::string() : s.substr(from, to - from + 1);
    };
    std::vector<std::pair<std::string, std::string>> entries;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    auto field = [&](const std::string& value) {
        return ScalarField::expression(Expression::parse(value));
    };
    for (const auto& [key, value] : entries) {
        if (key == "domain") {
            prob.bvp.domain = DomainSpec::parse(value);
            prob.dim = prob.bvp.domain.n;
        } else if (key == "class") {
            if (value == "elliptic")
                prob.bvp.pde_class = PdeClass::Elliptic;
            else if (value == "parabolic")
                prob.bvp.pde_class = PdeClass::Parabolic;
            else if (value == "hyperbolic")
                prob.bvp.pde_class = PdeClass::Hyperbolic;
            else
                throw std::invalid_argument("unknown class '" + value + "'");
        } else if (key == "bc") {
            if (value == "dirichlet")
                prob.bvp.bc = BoundaryCondition::Dirichlet;
            else if (value == "neumann")
                prob.bvp.bc = BoundaryCondition::Neumann;
            else
                throw std::invalid_argument("unknown bc '" + value + "'");
        } else if (key == "case") {
            if (value == "real")
                prob.bvp.kcase = KernelCase::Real;
            else if (value == "imaginary")
                prob.bvp.kcase = KernelCase::Imaginary;
            else
                throw std::invalid_argument("unknown case '" + value + "'");
        } else if (key == "f") {
            prob.bvp.f = field(value);
        } else if (key == "phi") {
            prob.bvp.phi = field(value);
        } else if (key == "psi") {
            prob.bvp.psi = field(value);
        } else if (key == "psi_t") {
            prob.bvp.psi_t = field(value);
        } else if (key == "support_radius") {
            support_radius = std::stod(value);
        } else if (key == "quadrant_mode") {
            if (value == "printed")
                prob.bvp.quadrant_mode = QuadrantNormalization::AsPrinted;
            else if (value == "unit-total")
                prob.bvp.quadrant_mode = QuadrantNormalization::UnitTotalMass;
            else
                throw std::invalid_argument("unknown quadrant_mode '" + value + "'");
        } else {
            throw std::invalid_argument("unknown problem key '" + key + "'");
        }
    }
    if (prob.dim == 0) throw std::invalid_argument(path + ": missing 'domain'");
    if (support_radius) {
        if (!prob.bvp.f.is_zero()) prob.bvp.f.with_support_radius(*support_radius);
        if (!prob.bvp.psi.is_zero()) prob.bvp.psi.with_support_radius(*support_radius);
        if (!prob.bvp.psi_t.is_zero()) prob.bvp.psi_t.with_support_radius(*support_radius);
    }
    prob.bvp.validate();
    return prob;
}

// Grid spec "x1=a:b:n;x2=a:b:n;t=a:b:n" expanded to evaluation points.
struct GridSpec {
    std::vector<std::vector<double>> axis_values;  // one list per spatial axis
    std::vector<double> times{0.0};
};

std::vector<double> expand_axis(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
    if (parts.size() == 1) return {parts[0]};
    if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2]))
        throw std::invalid_argument("grid axis must be 'value' or 'a:b:n'");
    const int n = static_cast<int>(parts[2]);
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(n == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * i / (n - 1));
    return out;
}

GridSpec parse_grid(const std::string& text, int dim) {
    GridSpec grid;
    grid.axis_values.assign(static_cast<std::size_t>(dim), {0.0});
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("grid item needs 'axis=a:b:n'");
        const std::string axis = item.substr(0, eq);
        const std::vector<double> values = expand_axis(item.substr(eq + 1));
        if (axis == "t") {
            grid.times = values;
        } else if (axis.size() >= 2 && axis[0] == 'x') {
            const int idx = std::stoi(axis.substr(1));
            if (idx < 1 || idx > dim) throw std::invalid_argument("grid axis out of range: " + axis);
            grid.axis_values[static_cast<std::size_t>(idx - 1)] = values;
        } else {
            throw std::invalid_argument("unknown grid axis '" + axis + "'");
        }
    }
    return grid;
}

// ---------------------------------------------------------------------------
// kernel subcommand
// ---------------------------------------------------------------------------
struct KernelArgs {
    std::string kernel;
    std::string domain;
    std::string bc = "dirichlet";
    std::string x, xp, xb;
    double dt = 1.0;
    int n = 3;
    double r = 1.0;
    double energy = 0.0;
    double u = 0.0;
    double width = 0.01;
    double tol = 1e-10;
    std::string mode = "printed";
    std::string out;
    std::string dump_images;
};

int run_kernel(const KernelArgs& args) {
    const BoundaryCondition bc =
        args.bc == "neumann" ? BoundaryCondition::Neumann : BoundaryCondition::Dirichlet;
    Complex value;
    std::string domain_label = "free:" + std::to_string(args.n);
    std::string s_label = "1";
    int n_label = args.n;
    std::vector<double> coords;

    if (args.kernel == "elliptic") {
        value = free_elliptic(args.n, args.r);
        coords = {args.r};
    } else if (args.kernel == "heat" || args.kernel == "schrodinger") {
        const KernelCase kcase =
            args.kernel == "heat" ? KernelCase::Real : KernelCase::Imaginary;
        if (kcase == KernelCase::Imaginary) s_label = "i";
        value = free_heat(args.n, args.r, args.dt, kcase);
        coords = {args.r, args.dt};
    } else if (args.kernel == "fixed-energy") {
        value = fixed_energy(args.n, args.r, args.energy);
        coords = {args.r, args.energy};
    } else if (args.kernel == "wave-I") {
        s_label = "i";
        value = hyperbolic_I(args.n, args.u, args.width);
        coords = {args.u, args.width};
    } else {
        if (args.domain.empty()) throw std::invalid_argument("--domain required for " + args.kernel);
        const DomainSpec domain = DomainSpec::parse(args.domain);
        domain_label = domain.to_string();
        n_label = domain.n;
        const Point x = parse_point(args.x);
        if (args.kernel == "green") {
            const Point xp = parse_point(args.xp);
            value = domain_green(domain, bc, x, xp, args.tol);
            coords.assign(x.coords().begin(), x.coords().end());
            coords.insert(coords.end(), xp.coords().begin(), xp.coords().end());
        } else if (args.kernel == "heat-domain") {
            const Point xp = parse_point(args.xp);
            value = heat_domain_kernel(domain, bc, x, args.dt, xp, args.tol);
            coords.assign(x.coords().begin(), x.coords().end());
            coords.insert(coords.end(), xp.coords().begin(), xp.coords().end());
            coords.push_back(args.dt);
        } else if (args.kernel == "poisson") {
            const Point xb = parse_point(args.xb);
            const QuadrantNormalization mode = args.mode == "unit-total"
                                                   ? QuadrantNormalization::UnitTotalMass
                                                   : QuadrantNormalization::AsPrinted;
            value = boundary_kernel_elliptic(domain, x, xb, mode);
            coords.assign(x.coords().begin(), x.coords().end());
            coords.insert(coords.end(), xb.coords().begin(), xb.coords().end());
        } else if (args.kernel == "first-passage") {
            const Point xb = parse_point(args.xb);
            value = boundary_kernel_parabolic(domain, x, args.dt, xb);
            coords.assign(x.coords().begin(), x.coords().end());
            coords.insert(coords.end(), xb.coords().begin(), xb.coords().end());
            coords.push_back(args.dt);
        } else {
            throw std::invalid_argument("unknown kernel '" + args.kernel + "'");
        }
        if (!args.dump_images.empty()) {
            const EquationClass cls = (args.kernel == "heat-domain" || args.kernel == "first-passage")
                                          ? EquationClass::Parabolic
                                          : EquationClass::Elliptic;
            const double scale = cls == EquationClass::Parabolic ? args.dt : 1.0;
            const ImageExpansion exp = build_image_expansion(domain, x, cls, scale, args.tol);
            json dump;
            dump["domain"] = domain.to_string();
            dump["point"] = std::vector<double>(x.coords().begin(), x.coords().end());
            dump["order"] = exp.order;
            dump["tail_bound"] = exp.tail_bound;
            for (const ImageTerm& term : exp.terms) {
                json t;
                t["image"] = std::vector<double>(term.image.coords().begin(), term.image.coords().end());
                t["weight_dirichlet"] = term.weight_dirichlet;
                t["weight_neumann"] = term.weight_neumann;
                std::vector<int> sign(term.element.sign.begin(),
                                      term.element.sign.begin() + domain.n);
                std::vector<int> shift(term.element.shift.begin(),
                                       term.element.shift.begin() + domain.n);
                t["sign"] = sign;
                t["shift"] = shift;
                dump["terms"].push_back(t);
            }
            std::ofstream f(args.dump_images);
            if (!f) throw std::ios_base::failure("cannot open '" + args.dump_images + "'");
            f << dump.dump(2) << "\n";
        }
    }

    Sink sink;
    sink.open(args.out);
    sink.out() << domain_label << "," << (bc == BoundaryCondition::Neumann ? "neumann" : "dirichlet")
               << "," << s_label << "," << n_label;
    for (double c : coords) sink.out() << "," << fmt17(c);
    sink.out() << "," << fmt17(value.real()) << "," << fmt17(value.imag()) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// solve subcommand
// ---------------------------------------------------------------------------
int run_solve(const std::string& problem_path, const std::vector<std::string>& at,
              const std::string& grid_text, double time, double tol, const std::string& out) {
    const ProblemFile prob = load_problem(problem_path);
    QuadratureSpec quad;
    quad.target_tol = tol;

    std::vector<SpaceTimePoint> points;
    for (const std::string& a : at) points.push_back({parse_point(a), time});
    if (!grid_text.empty()) {
        const GridSpec grid = parse_grid(grid_text, prob.dim);
        std::vector<std::size_t> idx(static_cast<std::size_t>(prob.dim), 0);
        while (true) {
            Point p(prob.dim);
            for (int i = 0; i < prob.dim; ++i)
                p[i] = grid.axis_values[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
            for (double t : grid.times) points.push_back({p, t});
            int d = 0;
            while (d < prob.dim &&
                   ++idx[static_cast<std::size_t>(d)] ==
                       grid.axis_values[static_cast<std::size_t>(d)].size())
                idx[static_cast<std::size_t>(d++)] = 0;
            if (d == prob.dim) break;
        }
    }
    if (points.empty()) throw std::invalid_argument("solve: no evaluation points (--at or --grid)");

    Sink sink;
    sink.open(out);
    for (const SpaceTimePoint& p : points) {
        double value = 0.0;
        switch (prob.bvp.pde_class) {
            case PdeClass::Elliptic: value = solve_elliptic(prob.bvp, p.space, quad); break;
            case PdeClass::Parabolic: value = solve_parabolic(prob.bvp, p, quad); break;
            case PdeClass::Hyperbolic: value = solve_wave_retarded(prob.bvp, p, quad); break;
        }
        for (int i = 0; i < p.space.dim(); ++i) sink.out() << fmt17(p.space[i]) << ",";
        sink.out() << fmt17(p.time) << "," << fmt17(value) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// mc subcommand
// ---------------------------------------------------------------------------
struct McArgs {
    std::string quantity = "solution";
    std::string problem;
    std::string at;
    double time = 0.0;
    std::string domain;
    std::string start;
    std::int64_t walks = 10000;
    std::uint64_t seed = 1;
    double dt = 1e-4;
    double eps = 1e-6;
    std::int64_t max_steps = 50'000'000;
    int threads = 0;
    std::string samples_csv;
    std::string out;
};

int run_mc(const McArgs& args) {
    mc::WalkConfig cfg;
    cfg.step_dt = args.dt;
    cfg.eps_shell = args.eps;
    cfg.max_steps = args.max_steps;

    json result;
    result["seed"] = args.seed;
    result["n"] = args.walks;

    if (args.quantity == "solution") {
        const ProblemFile prob = load_problem(args.problem);
        const Point x = parse_point(args.at);
        mc::Estimate est;
        if (prob.bvp.pde_class == PdeClass::Elliptic)
            est = mc::estimate_solution_elliptic(prob.bvp, x, args.walks, cfg, args.seed, args.threads);
        else if (prob.bvp.pde_class == PdeClass::Parabolic)
            est = mc::estimate_solution_parabolic(prob.bvp, {x, args.time}, args.walks, cfg,
                                                  args.seed, args.threads);
        else
            throw std::invalid_argument("mc: hyperbolic problems have no sampler");
        result["mean"] = est.mean;
        result["stderr"] = est.stderr_est;
    } else if (args.quantity == "mean-exit-time") {
        const DomainSpec domain = DomainSpec::parse(args.domain);
        const mc::Estimate est = mc::estimate_mean_exit_time(domain, parse_point(args.start),
                                                             args.walks, cfg, args.seed, args.threads);
        result["mean"] = est.mean;
        result["stderr"] = est.stderr_est;
    } else if (args.quantity == "exit-time-samples") {
        const DomainSpec domain = DomainSpec::parse(args.domain);
        const mc::ExitTimeSamples samples = mc::em_exit_times(domain, parse_point(args.start), cfg,
                                                              args.walks, args.seed, args.threads);
        double sum = 0.0;
        for (double t : samples.times) sum += t;
        result["mean"] = samples.times.empty() ? 0.0 : sum / static_cast<double>(samples.times.size());
        result["stderr"] = nullptr;
        result["n_exited"] = samples.times.size();
        result["n_capped"] = samples.n_capped;
        if (!args.samples_csv.empty()) {
            std::ofstream f(args.samples_csv);
            if (!f) throw std::ios_base::failure("cannot open '" + args.samples_csv + "'");
            for (double t : samples.times) f << fmt17(t) << "\n";
        }
    } else if (args.quantity == "exit-points") {
        const DomainSpec domain = DomainSpec::parse(args.domain);
        const std::vector<Point> points =
            mc::wos_exit_points(domain, parse_point(args.start), args.eps, args.walks, args.seed,
                                args.threads);
        if (!args.samples_csv.empty()) {
            std::ofstream f(args.samples_csv);
            if (!f) throw std::ios_base::failure("cannot open '" + args.samples_csv + "'");
            for (const Point& p : points) {
                for (int i = 0; i < p.dim(); ++i) f << (i ? "," : "") << fmt17(p[i]);
                f << "\n";
            }
        }
        result["n_exited"] = points.size();
    } else {
        throw std::invalid_argument("unknown mc quantity '" + args.quantity + "'");
    }

    Sink sink;
    sink.open(args.out);
    sink.out() << result.dump() << "\n";
    return 0;
}

}  // namespace

int run(std::vector<std::string> args) {
    CLI::App app{"Green's-function engine: closed-form kernels, superposition solvers, and a "
                 "stochastic first-exit oracle"};
    app.require_subcommand(1);

    KernelArgs kargs;
    CLI::App* kernel = app.add_subcommand("kernel", "evaluate a kernel; emits one CSV row");
    kernel->add_option("--kernel", kargs.kernel,
                       "elliptic|heat|schrodinger|fixed-energy|green|heat-domain|poisson|"
                       "first-passage|wave-I")
        ->required();
    kernel->add_option("--domain", kargs.domain, "domain spec, e.g. ball:3:1");
    kernel->add_option("--bc", kargs.bc, "dirichlet|neumann");
    kernel->add_option("--x", kargs.x, "first point, comma separated");
    kernel->add_option("--xp", kargs.xp, "second point");
    kernel->add_option("--xb", kargs.xb, "boundary point");
    kernel->add_option("--dt", kargs.dt, "elapsed time");
    kernel->add_option("--n", kargs.n, "dimension for free-space kernels");
    kernel->add_option("--r", kargs.r, "radial separation");
    kernel->add_option("--energy", kargs.energy, "fixed-energy parameter");
    kernel->add_option("--u", kargs.u, "invariant interval for wave-I");
    kernel->add_option("--width", kargs.width, "mollifier width for wave-I");
    kernel->add_option("--tol", kargs.tol, "image-sum tolerance");
    kernel->add_option("--mode", kargs.mode, "quadrant normalization: printed|unit-total");
    kernel->add_option("--out", kargs.out, "output path (default stdout)");
    kernel->add_option("--dump-images", kargs.dump_images, "write the image expansion as JSON");

    std::string problem_path, grid_text, solve_out;
    std::vector<std::string> at_points;
    double solve_time = 0.0, solve_tol = 1e-8;
    CLI::App* solve = app.add_subcommand("solve", "solve a boundary-value problem; emits CSV");
    solve->add_option("--problem", problem_path, "problem file")->required();
    solve->add_option("--at", at_points, "evaluation point, comma separated (repeatable)");
    solve->add_option("--time", solve_time, "evaluation time (parabolic/hyperbolic)");
    solve->add_option("--grid", grid_text, "grid spec x1=a:b:n;x2=...;t=a:b:n");
    solve->add_option("--tol", solve_tol, "quadrature tolerance");
    solve->add_option("--out", solve_out, "output path (default stdout)");

    McArgs margs;
    CLI::App* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimates; emits JSON");
    mc_cmd->add_option("--quantity", margs.quantity,
                       "solution|mean-exit-time|exit-time-samples|exit-points");
    mc_cmd->add_option("--problem", margs.problem, "problem file (for solution)");
    mc_cmd->add_option("--at", margs.at, "evaluation point");
    mc_cmd->add_option("--time", margs.time, "evaluation time (parabolic)");
    mc_cmd->add_option("--domain", margs.domain, "domain spec (exit-time quantities)");
    mc_cmd->add_option("--start", margs.start, "walk start point");
    mc_cmd->add_option("--walks", margs.walks, "number of walks");
    mc_cmd->add_option("--seed", margs.seed, "PRNG seed");
    mc_cmd->add_option("--dt", margs.dt, "Euler-Maruyama step");
    mc_cmd->add_option("--eps", margs.eps, "walk-on-spheres shell");
    mc_cmd->add_option("--max-steps", margs.max_steps, "per-walk step cap");
    mc_cmd->add_option("--threads", margs.threads, "worker count (0 = auto)");
    mc_cmd->add_option("--samples-csv", margs.samples_csv, "write per-walk samples");
    mc_cmd->add_option("--out", margs.out, "output path (default stdout)");

    std::string suite = "fast", verify_out;
    std::uint64_t verify_seed = 42;
    int verify_threads = 0;
    CLI::App* verify_cmd = app.add_subcommand("verify", "run the acceptance criteria");
    verify_cmd->add_option("--suite", suite, "fast|full");
    verify_cmd->add_option("--seed", verify_seed, "PRNG seed");
    verify_cmd->add_option("--threads", verify_threads, "worker count (0 = auto)");
    verify_cmd->add_option("--out", verify_out, "report path (default stdout)");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (kernel->parsed()) return run_kernel(kargs);
        if (solve->parsed())
            return run_solve(problem_path, at_points, grid_text, solve_time, solve_tol, solve_out);
        if (mc_cmd->parsed()) return run_mc(margs);
        if (verify_cmd->parsed()) {
            verify::Options options;
            if (suite == "full")
                options.suite = verify::Suite::Full;
            else if (suite == "fast")
                options.suite = verify::Suite::Fast;
            else
                throw std::invalid_argument("unknown suite '" + suite + "'");
            options.seed = verify_seed;
            options.threads = verify_threads;
            const auto results = verify::run_acceptance(options);
            Sink sink;
            sink.open(verify_out);
            return verify::print_report(results, sink.out());
        }
    } catch (const std::ios_base::failure& e) {
        std::cerr << "greenpath: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "greenpath: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "greenpath: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace greenpath::cli
