// Command-line front end: every experiment the library runs, with
// deterministic seeding and CSV/JSON emission. Output begins with one
// '#'-prefixed JSON metadata line (config echo, seed, version, workers)
// followed by the data rows; --format json wraps everything in a single
// JSON document instead.

#include <CLI11.hpp>
#include <json.hpp>

#include "skewlab/branch.hpp"
#include "skewlab/format.hpp"
#include "skewlab/map.hpp"
#include "skewlab/measure.hpp"
#include "skewlab/rng.hpp"
#include "skewlab/witness.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using nlohmann::json;
using namespace skewlab;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Output {
    std::unique_ptr<std::ofstream> file;
    std::ostream* os = &std::cout;
};

Output open_output(const std::string& path) {
    Output out;
    if (path.empty()) return out;
    std::string full = path;
    const char* dir = std::getenv("SKEWLAB_OUT_DIR");
    if (dir && *dir && path.front() != '/') full = std::string(dir) + "/" + path;
    out.file = std::make_unique<std::ofstream>(full);
    if (!*out.file) throw std::invalid_argument("cannot open output file: " + full);
    out.os = out.file.get();
    return out;
}

json rect_json(const Rectangle& r) {
    return json::array({r.x_lo, r.x_hi, r.y_lo, r.y_hi});
}

Rectangle rect_from(const std::vector<double>& v) {
    return Rectangle(v.at(0), v.at(1), v.at(2), v.at(3));
}

// Emits `# <meta>` then header+rows for csv, or one document for json.
void emit(Output& out, const std::string& format, json meta, const std::string& header,
          const std::vector<std::vector<std::string>>& rows) {
    meta["version"] = kVersion;
    if (format == "json") {
        json doc;
        doc["meta"] = std::move(meta);
        json data = json::array();
        std::stringstream names(header);
        std::vector<std::string> cols;
        for (std::string c; std::getline(names, c, ',');) cols.push_back(c);
        for (const auto& row : rows) {
            json r;
            for (std::size_t i = 0; i < row.size() && i < cols.size(); ++i)
                r[cols[i]] = row[i];
            data.push_back(std::move(r));
        }
        doc["data"] = std::move(data);
        *out.os << doc.dump(2) << "\n";
        return;
    }
    *out.os << "# " << meta.dump() << "\n" << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            *out.os << (i ? "," : "") << row[i];
        *out.os << "\n";
    }
}

json fit_json(const DecayFit& fit) {
    return json{{"lambda", fit.lambda},     {"amplitude", fit.amplitude},
                {"r_squared", fit.r_squared}, {"window_lo", fit.n_min},
                {"window_hi", fit.n_max},   {"points", fit.points},
                {"accepted", fit.accepted}, {"status", fit.status}};
}

// Rectangles for the invariance sweep: seeded, strictly interior.
std::vector<Rectangle> random_rects(unsigned count, std::uint64_t seed) {
    RngStream gen(seed, 0xDECAF);
    std::vector<Rectangle> rects;
    rects.reserve(count);
    for (unsigned i = 0; i < count; ++i) {
        double w = 0.02 + 0.45 * gen.uniform01();
        double h = 0.02 + 0.45 * gen.uniform01();
        double x = 0.01 + (0.98 - w) * gen.uniform01();
        double y = 0.01 + (0.98 - h) * gen.uniform01();
        rects.emplace_back(x, x + w, y, y + h);
    }
    return rects;
}

struct SeriesFile {
    CorrelationSeries series;
};

// Reads back a correlation CSV this tool wrote (metadata line + rows).
SeriesFile read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open series file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw std::invalid_argument("series file lacks the metadata header line");
    json meta = json::parse(line.substr(2));
    auto a = meta.at("rect_a").get<std::vector<double>>();
    auto b = meta.at("rect_b").get<std::vector<double>>();
    SeriesFile sf{CorrelationSeries{meta.at("c").get<double>(), rect_from(a), rect_from(b),
                                    {},
                                    meta.value("samples", std::uint64_t{0}),
                                    meta.value("seed", std::uint64_t{0}),
                                    meta.value("workers", 1u),
                                    meta.value("resampled", std::uint64_t{0}),
                                    meta.value("mixing_regime", true)}};
    std::getline(in, line);  // column header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f;
        CorrelationEntry e{};
        std::getline(ss, f, ',');
        e.n = static_cast<unsigned>(std::stoul(f));
        std::getline(ss, f, ',');
        e.estimate = std::stod(f);
        std::getline(ss, f, ',');
        e.std_error = std::stod(f);
        std::getline(ss, f, ',');
        e.samples = std::stoull(f);
        sf.series.entries.push_back(e);
    }
    return sf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the singular skew product "
                 "(x, y) -> (2x mod 1, y + c/|x - 1/2| mod 1)"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "flat key=value file overriding defaults");

    double c = 0.3;
    std::uint64_t seed = 0;
    unsigned workers = 4;
    unsigned precision = kDefaultPrecisionBits;
    std::string out_path;
    std::string format = "csv";
    app.add_option("--c", c, "singularity strength c > 0")->capture_default_str();
    app.add_option("--workers", workers, "sampling worker count")->capture_default_str();
    app.add_option("--precision-bits", precision, "dyadic precision budget")
        ->capture_default_str();
    app.add_option("--out", out_path, "output path (default stdout; SKEWLAB_OUT_DIR prefixes)");
    app.add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // --- orbit ---------------------------------------------------------
    auto* orbit = app.add_subcommand("orbit", "forward trajectory dump");
    double ox = 0.0, oy = 0.0;
    unsigned on = 10;
    orbit->add_option("--x", ox, "initial base coordinate")->required();
    orbit->add_option("--y", oy, "initial fiber coordinate")->required();
    orbit->add_option("--n", on, "iterate count")->required();

    // --- preimage ------------------------------------------------------
    auto* pre = app.add_subcommand("preimage", "inverse-branch point or tree");
    double px = 0.0, py = 0.0;
    std::string pword;
    unsigned pdepth = 0;
    pre->add_option("--x", px)->required();
    pre->add_option("--y", py)->required();
    auto* popt_word = pre->add_option("--word", pword, "branch word, e.g. 0110");
    auto* popt_depth = pre->add_option("--depth", pdepth, "emit all 2^depth preimages");
    popt_word->excludes(popt_depth);

    // --- curve ---------------------------------------------------------
    auto* curve_cmd = app.add_subcommand("curve", "branch-curve polyline with asymptotes");
    std::string cword;
    double cy0 = 0.0, cx0 = 0.0;
    unsigned csamples = 512;
    curve_cmd->add_option("--word", cword)->required();
    curve_cmd->add_option("--y0", cy0, "anchor fiber coordinate")->capture_default_str();
    curve_cmd->add_option("--x0", cx0, "anchor base coordinate")->capture_default_str();
    curve_cmd->add_option("--samples", csamples)->capture_default_str();

    // --- length --------------------------------------------------------
    auto* len = app.add_subcommand("length", "pulled-segment expansion report");
    std::string lword;
    double lxlo = 0.1, lxhi = 0.2, ly = 0.5;
    len->add_option("--word", lword)->required();
    len->add_option("--xlo", lxlo)->required();
    len->add_option("--xhi", lxhi)->required();
    len->add_option("--y", ly)->capture_default_str();

    // --- invariance ----------------------------------------------------
    auto* inv = app.add_subcommand("invariance", "Lebesgue invariance checks");
    unsigned inv_rects = 100;
    std::uint64_t inv_samples = 100000;
    inv->add_option("--rects", inv_rects)->capture_default_str();
    inv->add_option("--samples", inv_samples, "samples per rectangle")->capture_default_str();
    inv->add_option("--seed", seed)->required();

    // --- correlation ---------------------------------------------------
    auto* corr = app.add_subcommand("correlation", "m(f^-n A and B) series");
    std::vector<double> corr_a{0.1, 0.35, 0.2, 0.45};
    std::vector<double> corr_b{0.1, 0.35, 0.2, 0.45};
    unsigned corr_nmax = 18;
    std::uint64_t corr_samples = 1000000;
    bool corr_fit = false;
    unsigned fit_lo = 0, fit_hi = 1u << 30;
    corr->add_option("--rect-a", corr_a, "x_lo,x_hi,y_lo,y_hi")->expected(4)->delimiter(',');
    corr->add_option("--rect-b", corr_b, "x_lo,x_hi,y_lo,y_hi")->expected(4)->delimiter(',');
    corr->add_option("--n-max", corr_nmax)->capture_default_str();
    corr->add_option("--samples", corr_samples)->capture_default_str();
    corr->add_option("--seed", seed)->required();
    corr->add_flag("--fit", corr_fit, "append an exponential-rate fit to the metadata");
    corr->add_option("--fit-lo", fit_lo)->capture_default_str();
    corr->add_option("--fit-hi", fit_hi, "fit window upper end (default: all entries)");

    // --- fit -----------------------------------------------------------
    auto* fitc = app.add_subcommand("fit", "exponential rate fit of a stored series");
    std::string fit_input;
    fitc->add_option("--input", fit_input, "correlation CSV written by this tool")->required();
    fitc->add_option("--fit-lo", fit_lo)->capture_default_str();
    fitc->add_option("--fit-hi", fit_hi)->capture_default_str();

    // --- recurrence / visit --------------------------------------------
    auto* rec = app.add_subcommand("recurrence", "not-yet-returned block fractions");
    std::vector<double> rec_a{0.2, 0.3, 0.2, 0.3};
    unsigned rec_blocks = 8, rec_h = 0;
    std::uint64_t rec_samples = 1000000;
    rec->add_option("--rect", rec_a)->expected(4)->delimiter(',');
    rec->add_option("--blocks", rec_blocks)->capture_default_str();
    rec->add_option("--h-blocks", rec_h, "extra doubling blocks in the return time")
        ->capture_default_str();
    rec->add_option("--samples", rec_samples)->capture_default_str();
    rec->add_option("--seed", seed)->required();

    auto* vis = app.add_subcommand("visit", "not-yet-visited block fractions");
    std::vector<double> vis_a{0.2, 0.3, 0.2, 0.3};
    std::vector<double> vis_b{0.6, 0.7, 0.6, 0.7};
    vis->add_option("--rect-a", vis_a)->expected(4)->delimiter(',');
    vis->add_option("--rect-b", vis_b)->expected(4)->delimiter(',');
    vis->add_option("--blocks", rec_blocks)->capture_default_str();
    vis->add_option("--h-blocks", rec_h)->capture_default_str();
    vis->add_option("--samples", rec_samples)->capture_default_str();
    vis->add_option("--seed", seed)->required();

    // --- witness ---------------------------------------------------------
    auto* wit = app.add_subcommand("witness", "forward-mixing witness plan + verification");
    double ax = 0.25, ay = 0.5, ahw = 0.125, ahh = -1.0;
    double bx = 0.25, by = 0.5, bhw = 0.125, bhh = -1.0;
    unsigned wgrid = 64, wkmax = 6;
    wit->add_option("--ax", ax)->required();
    wit->add_option("--ay", ay)->required();
    wit->add_option("--ahw", ahw, "half-width of A")->required();
    wit->add_option("--ahh", ahh, "half-height of A (defaults to --ahw)");
    wit->add_option("--bx", bx)->required();
    wit->add_option("--by", by)->required();
    wit->add_option("--bhw", bhw)->required();
    wit->add_option("--bhh", bhh);
    wit->add_option("--grid", wgrid)->capture_default_str();
    wit->add_option("--kmax", wkmax)->capture_default_str();

    // --- stripwidth ------------------------------------------------------
    auto* strip = app.add_subcommand("stripwidth", "pulled-side strip width profile");
    std::string sword = "000100110001";
    std::vector<double> srect{1.0 / 512.0, 1.0 / 512.0 + 0.1, 0.85, 0.95};
    unsigned s_nlo = 5, s_nhi = 100;
    strip->add_option("--word", sword)->capture_default_str();
    strip->add_option("--rect", srect)->expected(4)->delimiter(',');
    strip->add_option("--n-lo", s_nlo)->capture_default_str();
    strip->add_option("--n-hi", s_nhi)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        MapParams params(c);
        Output out = open_output(out_path);
        json meta{{"c", c}, {"workers", workers}, {"precision_bits", precision}};

        if (*orbit) {
            meta["command"] = "orbit";
            meta["x"] = ox;
            meta["y"] = oy;
            meta["n"] = on;
            TorusPoint p(DyadicX::from_double(ox, precision), oy);
            std::vector<std::vector<std::string>> rows;
            rows.push_back({"0", fmt_double(p.x.to_double()), fmt_double(p.y)});
            for (unsigned t = 1; t <= on; ++t) {
                p = apply_map(p, params);
                rows.push_back({fmt_u64(t), fmt_double(p.x.to_double()), fmt_double(p.y)});
            }
            emit(out, format, meta, "n,x,y", rows);
        } else if (*pre) {
            meta["command"] = "preimage";
            meta["x"] = px;
            meta["y"] = py;
            TorusPoint p(DyadicX::from_double(px, precision), py);
            std::vector<std::vector<std::string>> rows;
            if (!pword.empty()) {
                meta["word"] = pword;
                TorusPoint z = preimage_word(p, BranchWord::from_string(pword), params);
                rows.push_back({pword, fmt_double(z.x.to_double()), fmt_double(z.y)});
            } else {
                if (pdepth == 0 || pdepth > 20)
                    throw std::invalid_argument("preimage: --depth must be in 1..20");
                meta["depth"] = pdepth;
                for (std::uint64_t v = 0; v < (std::uint64_t{1} << pdepth); ++v) {
                    BranchWord w = BranchWord::from_value(v, pdepth);
                    TorusPoint z = preimage_word(p, w, params);
                    rows.push_back({w.to_string(), fmt_double(z.x.to_double()), fmt_double(z.y)});
                }
            }
            emit(out, format, meta, "word,x,y", rows);
        } else if (*curve_cmd) {
            meta["command"] = "curve";
            meta["word"] = cword;
            meta["y0"] = cy0;
            BranchWord w = BranchWord::from_string(cword);
            BranchCurve curve(w, TorusPoint(DyadicX::from_double(cx0, precision), cy0), params);
            json asy = json::array();
            for (const Asymptote& a : asymptotes(w).all)
                asy.push_back(json{{"x", a.position.to_double()},
                                   {"sign", a.sign},
                                   {"index", a.index}});
            meta["asymptotes"] = std::move(asy);
            CriticalPointReport cp = critical_point(curve);
            meta["critical_point"] =
                cp.exists ? json{{"exists", true},
                                 {"x", cp.location},
                                 {"bracket_lo", cp.bracket_lo.to_double()},
                                 {"bracket_hi", cp.bracket_hi.to_double()}}
                          : json{{"exists", false}};
            std::vector<std::vector<std::string>> rows;
            double lo = curve.domain_lo(), span = curve.domain_hi() - curve.domain_lo();
            for (unsigned i = 1; i < csamples; ++i) {
                double x = lo + span * i / csamples;
                try {
                    double yl = curve.eval_lift(x);
                    rows.push_back({fmt_double(x), fmt_double(yl), fmt_double(mod1(yl))});
                } catch (const AtAsymptote&) {
                }
            }
            emit(out, format, meta, "x,y_lift,y_mod1", rows);
        } else if (*len) {
            meta["command"] = "length";
            meta["word"] = lword;
            HSegment seg = HSegment::from_doubles(lxlo, lxhi, ly, precision);
            auto rep = preimage_segment_length(seg, BranchWord::from_string(lword), params);
            meta["avoids_critical_strip"] = pull_avoids_critical_strip(
                seg, BranchWord::from_string(lword), params);
            emit(out, format, meta, "word_length,dx,measured_length,lower_bound,threshold_length",
                 {{fmt_u64(rep.word_length), fmt_double(seg.width()),
                   fmt_double(rep.measured_length), fmt_double(rep.lower_bound),
                   fmt_u64(rep.threshold_length)}});
        } else if (*inv) {
            meta["command"] = "invariance";
            meta["rects"] = inv_rects;
            meta["samples"] = inv_samples;
            meta["seed"] = seed;
            auto report =
                verify_invariance(random_rects(inv_rects, seed), params, inv_samples, seed,
                                  workers);
            meta["resampled"] = report.resampled;
            std::vector<std::vector<std::string>> rows;
            for (const auto& e : report.entries)
                rows.push_back({fmt_double(e.rect.x_lo), fmt_double(e.rect.x_hi),
                                fmt_double(e.rect.y_lo), fmt_double(e.rect.y_hi),
                                fmt_double(e.residual), fmt_double(e.mc_fraction),
                                fmt_double(e.mc_stderr), e.within_3sigma ? "1" : "0"});
            emit(out, format, meta,
                 "x_lo,x_hi,y_lo,y_hi,residual,mc_fraction,mc_stderr,within_3sigma", rows);
        } else if (*corr) {
            meta["command"] = "correlation";
            Rectangle A = rect_from(corr_a), B = rect_from(corr_b);
            if (!params.mixing_regime())
                std::cerr << "warning: c = " << c
                          << " is outside the mixing regime c > 1/4; decay is not guaranteed\n";
            auto series = correlation_series(A, B, corr_nmax, corr_samples, seed, params,
                                             workers, precision);
            meta["rect_a"] = rect_json(A);
            meta["rect_b"] = rect_json(B);
            meta["n_max"] = corr_nmax;
            meta["samples"] = corr_samples;
            meta["seed"] = seed;
            meta["resampled"] = series.resampled;
            meta["mixing_regime"] = series.mixing_regime;
            if (corr_fit)
                meta["fit"] = fit_json(fit_exponential_rate(series, fit_lo, fit_hi));
            std::vector<std::vector<std::string>> rows;
            for (const auto& e : series.entries)
                rows.push_back({fmt_u64(e.n), fmt_double(e.estimate), fmt_double(e.std_error),
                                fmt_u64(e.samples)});
            emit(out, format, meta, "n,estimate,stderr,samples", rows);
        } else if (*fitc) {
            meta["command"] = "fit";
            meta["input"] = fit_input;
            SeriesFile sf = read_series_csv(fit_input);
            DecayFit fit = fit_exponential_rate(sf.series, fit_lo, fit_hi);
            meta["fit"] = fit_json(fit);
            emit(out, format, meta, "lambda,amplitude,r_squared,points,accepted",
                 {{fmt_double(fit.lambda), fmt_double(fit.amplitude), fmt_double(fit.r_squared),
                   fmt_u64(fit.points), fit.accepted ? "1" : "0"}});
        } else if (*rec || *vis) {
            Rectangle A = rect_from(*rec ? rec_a : vis_a);
            Rectangle B = *rec ? A : rect_from(vis_b);
            meta["command"] = *rec ? "recurrence" : "visit";
            meta["rect_a"] = rect_json(A);
            meta["rect_b"] = rect_json(B);
            meta["blocks"] = rec_blocks;
            meta["h"] = rec_h;
            meta["samples"] = rec_samples;
            meta["seed"] = seed;
            auto series = *rec ? recurrence_fraction(A, rec_blocks, params, rec_samples, seed,
                                                     workers, rec_h)
                               : visit_fraction(A, B, rec_blocks, params, rec_samples, seed,
                                                workers, rec_h);
            meta["n0"] = series.block_params.n0;
            meta["k0"] = series.block_params.k0;
            meta["block_length"] = series.block_params.block_length;
            meta["theta_hat"] = series.theta_hat;
            meta["resampled"] = series.resampled;
            std::vector<std::vector<std::string>> rows;
            for (const auto& e : series.entries)
                rows.push_back({fmt_u64(e.block), fmt_double(e.not_yet)});
            emit(out, format, meta, "block,not_yet", rows);
        } else if (*wit) {
            meta["command"] = "witness";
            if (ahh < 0) ahh = ahw;
            if (bhh < 0) bhh = bhw;
            Rectangle A = Rectangle::from_center(ax, ay, ahw, ahh);
            Rectangle B = Rectangle::from_center(bx, by, bhw, bhh);
            WitnessPlan plan = build_witness(A, B);
            auto report = verify_witness(plan, params, wgrid, wkmax);
            meta["rect_a"] = rect_json(A);
            meta["rect_b"] = rect_json(B);
            meta["plan"] = json{{"N", plan.N},
                                {"word", plan.r.to_string()},
                                {"threshold", plan.threshold},
                                {"cover_time", plan.cover_time},
                                {"x_r", plan.x_r.to_double()},
                                {"y_r", plan.y_r}};
            meta["grid_used"] = report.grid_used;
            meta["singular_points"] = report.singular_points;
            std::vector<std::vector<std::string>> rows;
            for (const auto& h : report.hits)
                rows.push_back(
                    {fmt_u64(h.n), fmt_double(h.x), fmt_double(h.y), fmt_u64(h.tested)});
            emit(out, format, meta, "n,hit_x,hit_y,points_tested", rows);
        } else if (*strip) {
            meta["command"] = "stripwidth";
            Rectangle rect = rect_from(srect);
            BranchWord w = BranchWord::from_string(sword);
            auto prof = strip_width_profile(rect, w, params, s_nlo, s_nhi);
            auto fit = fit_power_law(prof, s_nlo, s_nhi);
            meta["word"] = sword;
            meta["rect"] = rect_json(rect);
            meta["power_fit"] = json{{"exponent", fit.exponent},
                                     {"amplitude", fit.amplitude},
                                     {"r_squared", fit.r_squared},
                                     {"points", fit.points}};
            std::vector<std::vector<std::string>> rows;
            for (const auto& [n, width] : prof)
                rows.push_back({fmt_u64(n), fmt_double(width)});
            emit(out, format, meta, "wrap,width", rows);
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.kind() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
}
