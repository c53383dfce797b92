// Copyright 2026 The qbd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "qbd/qbd.hpp"

namespace qbd::cli {

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

double parse_number(const std::string &text) {
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        throw UsageError("not a number: '" + text + "'");
    }
    while (used < text.size() && text[used] == ' ') {
        used++;
    }
    if (used != text.size()) {
        throw UsageError("not a number: '" + text + "'");
    }
    return v;
}

}  // namespace

std::vector<double> log_grid_with_unit(double lo, double hi, std::size_t count) {
    if (!(lo > 0) || !(hi >= lo) || count == 0) {
        throw UsageError("log grid needs 0 < lo <= hi and at least one point");
    }
    std::vector<double> out;
    double a = std::log10(lo), b = std::log10(hi);
    for (std::size_t i = 0; i < count; i++) {
        double e = count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back(std::pow(10.0, e));
    }
    out.front() = lo;
    out.back() = hi;
    if (lo <= 1 && 1 <= hi && std::find(out.begin(), out.end(), 1.0) == out.end()) {
        auto nearest = std::min_element(out.begin(), out.end(), [](double x, double y) {
            return std::abs(std::log(x)) < std::abs(std::log(y));
        });
        if (std::abs(std::log(*nearest)) < 1e-9) {
            *nearest = 1.0;
        } else {
            out.insert(std::upper_bound(out.begin(), out.end(), 1.0), 1.0);
        }
    }
    return out;
}

std::vector<double> parse_grid(const std::string &spec, std::size_t default_count, bool log) {
    if (spec.empty()) {
        throw UsageError("empty grid specification");
    }
    auto dots = spec.find("..");
    if (dots == std::string::npos) {
        std::vector<double> out;
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            out.push_back(parse_number(item));
        }
        if (out.empty()) {
            throw UsageError("empty grid specification");
        }
        return out;
    }
    std::string lo_text = spec.substr(0, dots);
    std::string rest = spec.substr(dots + 2);
    std::size_t count = default_count;
    if (auto colon = rest.find(':'); colon != std::string::npos) {
        double c = parse_number(rest.substr(colon + 1));
        if (!(c >= 1) || c != std::floor(c)) {
            throw UsageError("grid point count must be a positive integer: '" + spec + "'");
        }
        count = static_cast<std::size_t>(c);
        rest = rest.substr(0, colon);
    }
    double lo = parse_number(lo_text), hi = parse_number(rest);
    if (!(hi >= lo) || count == 0) {
        throw UsageError("grid range must satisfy lo <= hi: '" + spec + "'");
    }
    if (log) {
        return log_grid_with_unit(lo, hi, count);
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < count; i++) {
        out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    out.back() = hi;
    return out;
}

namespace {

constexpr double kPi = std::numbers::pi;

struct StateFlags {
    std::string state = "coherent";
    double alpha = 0;
    double alpha_im = 0;
    double r = 0;
    int n = 0;
    std::string parity = "even";

    StatePrep build() const {
        StatePrep s;
        if (state == "coherent") {
            s = Coherent{{alpha, alpha_im}};
        } else if (state == "squeezed") {
            s = SqueezedVacuum{r};
        } else if (state == "number") {
            s = NumberState{n};
        } else {
            s = Cat{alpha, parity == "odd" ? Parity::Odd : Parity::Even};
        }
        validate(s);
        return s;
    }
};

struct PerturbationFlags {
    double z_abs = 1;
    double z_phase = 0;
    bool random_phase = false;

    Perturbation build() const {
        if (!(z_abs >= 0) || !std::isfinite(z_abs)) {
            throw DomainError("--z-abs must be finite and >= 0");
        }
        return random_phase ? Perturbation::random_phase(z_abs * z_abs) : Perturbation::polar(z_abs * z_abs, z_phase);
    }
};

struct CommonFlags {
    std::string out;
    std::uint64_t seed = 0;
    std::size_t dim = 0;
    std::size_t quad = 0;
    unsigned threads = 0;
    std::string squeeze_form = "exact";

    bool oracle() const {
        return dim > 0 || quad > 0;
    }
    SqueezeForm form() const {
        return squeeze_form == "published" ? SqueezeForm::Published : SqueezeForm::Exact;
    }
    unsigned workers() const {
        return threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    }
};

void add_state_flags(CLI::App *app, StateFlags &f) {
    app->add_option("--state", f.state, "coherent | squeezed | number | cat")
        ->check(CLI::IsMember({"coherent", "squeezed", "number", "cat"}));
    app->add_option("--alpha", f.alpha, "coherent amplitude (real part) or cat amplitude");
    app->add_option("--alpha-im", f.alpha_im, "coherent amplitude (imaginary part)");
    app->add_option("--r", f.r, "squeezing parameter");
    app->add_option("--n", f.n, "Fock index");
    app->add_option("--parity", f.parity, "cat parity: even | odd")->check(CLI::IsMember({"even", "odd"}));
}

void add_perturbation_flags(CLI::App *app, PerturbationFlags &f) {
    app->add_option("--z-abs", f.z_abs, "|z|");
    app->add_option("--z-phase", f.z_phase, "arg z (radians)");
    app->add_flag("--random-phase", f.random_phase, "average the overlap over the phase of z");
}

void add_common_flags(CLI::App *app, CommonFlags &f) {
    app->add_option("--out", f.out, "CSV output path (default: stdout)");
    app->add_option("--seed", f.seed, "RNG seed");
    app->add_option("--dim", f.dim, "Fock truncation for the numerical oracle (0: automatic)");
    app->add_option("--quad", f.quad, "phase quadrature nodes for the numerical oracle (0: automatic)");
    app->add_option("--threads", f.threads, "worker threads for grids (0: hardware concurrency)");
    app->add_option("--squeeze-form", f.squeeze_form, "squeezed-state overlap: exact | published")
        ->check(CLI::IsMember({"exact", "published"}));
}

/// kappa for `state` at intensity I and fixed phase, or phase averaged when
/// `phase` is empty. The oracle path is taken when --dim or --quad is set.
double kappa_at(const StatePrep &state, double intensity, std::optional<double> phase, const CommonFlags &c) {
    if (!c.oracle()) {
        Perturbation p = phase ? Perturbation::polar(intensity, *phase) : Perturbation::random_phase(intensity);
        return kappa(state, p, c.form());
    }
    std::size_t dim = c.dim > 0 ? c.dim : adequate_dim(state, intensity);
    if (phase) {
        return overlap_numeric(state, std::polar(std::sqrt(intensity), *phase), dim).kappa;
    }
    return phase_averaged_kappa_numeric(state, intensity, dim, c.quad > 0 ? c.quad : 16);
}

const char *method_name(const CommonFlags &c) {
    return c.oracle() ? "fock-oracle" : "closed-form";
}

std::optional<ReferenceScaling> reference_for(const StatePrep &state, std::optional<double> phase, double p01) {
    auto at = [&](double target) { return phase && std::abs(std::remainder(*phase - target, kPi)) < 1e-12; };
    if (p01 > 0.5) {
        return std::nullopt;
    }
    double nbar = mean_excitation(state);
    if (std::holds_alternative<Coherent>(state)) {
        return phase ? std::optional(reference_scaling(ReferenceFamily::CoherentRef, {}, p01)) : std::nullopt;
    }
    if (const auto *sq = std::get_if<SqueezedVacuum>(&state)) {
        auto params = ReferenceParams::squeezed(sq->squeeze);
        if (!phase) {
            return nbar > 0 ? std::optional(reference_scaling(ReferenceFamily::SqueezedRandomAsymptotic, params, p01))
                            : std::nullopt;
        }
        if (at(0)) {
            return reference_scaling(ReferenceFamily::SqueezedPhase0, params, p01);
        }
        if (at(kPi / 2)) {
            return reference_scaling(ReferenceFamily::SqueezedPhaseHalfPi, params, p01);
        }
        return std::nullopt;
    }
    if (const auto *num = std::get_if<NumberState>(&state)) {
        return num->n > 0 ? std::optional(reference_scaling(ReferenceFamily::NumberAsymptotic, {.n = num->n}, p01))
                          : std::nullopt;
    }
    if (nbar <= 0) {
        return std::nullopt;
    }
    if (!phase) {
        return reference_scaling(ReferenceFamily::CatRandom, {.nbar = nbar}, p01);
    }
    if (at(0)) {
        return reference_scaling(ReferenceFamily::CatPhase0, {.nbar = nbar}, p01);
    }
    if (at(kPi / 2)) {
        return reference_scaling(ReferenceFamily::CatPhaseHalfPi, {.nbar = nbar}, p01);
    }
    return std::nullopt;
}

std::string reference_note(const ReferenceScaling &ref) {
    std::string note = ref.proportional ? "proportional" : "published";
    return ref.outside_validity ? note + ";outside-validity" : note;
}

std::string join(std::initializer_list<std::string> cells) {
    std::string s;
    for (const auto &c : cells) {
        if (!s.empty()) {
            s += ',';
        }
        s += c;
    }
    return s;
}

// Collects the CSV body and writes it, preceded by '#' metadata, in one go.
class CsvOutput {
   public:
    CsvOutput(const CLI::App *sub, const CommonFlags &common) : common_(common) {
        meta_ << "# qbd " << sub->get_name() << "\n";
        std::stringstream cfg(sub->config_to_str(true, false));
        std::string line;
        while (std::getline(cfg, line)) {
            if (!line.empty() && line.front() != '[') {
                meta_ << "# " << line << "\n";
            }
        }
    }
    void note(const std::string &key, const std::string &value) {
        meta_ << "# " << key << "=" << value << "\n";
    }
    void header(const std::string &h) {
        body_ << h << "\n";
    }
    void row(const std::string &r) {
        body_ << r << "\n";
    }
    void rows(const std::vector<std::string> &rs) {
        for (const auto &r : rs) {
            row(r);
        }
    }
    int flush(std::ostream &out, std::ostream &err) const {
        std::string text = meta_.str() + body_.str();
        if (common_.out.empty()) {
            out << text;
            out.flush();
            return kOk;
        }
        std::ofstream file(common_.out, std::ios::binary);
        file << text;
        file.close();
        if (!file) {
            err << "error: cannot write " << common_.out << "\n";
            return kIoError;
        }
        return kOk;
    }

   private:
    const CommonFlags &common_;
    std::ostringstream meta_;
    std::ostringstream body_;
};

std::optional<double> phase_of(const PerturbationFlags &p) {
    return p.random_phase ? std::nullopt : std::optional(p.z_phase);
}

std::string phase_cell(std::optional<double> phase) {
    return phase ? format_double(*phase) : "random";
}

// ---- subcommands ----

int cmd_overlap(const CLI::App *sub, const StateFlags &sf, const PerturbationFlags &pf, const CommonFlags &c,
                std::ostream &out, std::ostream &err) {
    StatePrep state = sf.build();
    Perturbation p = pf.build();
    double intensity = p.intensity();
    std::string re, im;
    double k;
    if (p.is_random_phase()) {
        k = kappa_at(state, intensity, std::nullopt, c);
    } else {
        complex z = p.amplitude();
        OverlapResult r;
        if (c.oracle()) {
            r = overlap_numeric(state, z, c.dim > 0 ? c.dim : adequate_dim(state, intensity));
        } else if (const auto *sq = std::get_if<SqueezedVacuum>(&state); sq && c.form() == SqueezeForm::Published) {
            double kp = kappa_squeezed_published(sq->squeeze, intensity, *p.phase());
            r = {std::sqrt(kp), kp};
        } else {
            r = overlap(state, z);
        }
        k = r.kappa;
        re = format_double(r.overlap.real());
        im = format_double(r.overlap.imag());
    }
    CsvOutput csv(sub, c);
    csv.header("state,intensity,phase,overlap_re,overlap_im,kappa,method");
    csv.row(join({describe(state), format_double(intensity), phase_cell(p.phase()), re, im, format_double(k),
                  method_name(c)}));
    err << "overlap: " << describe(state) << " |z|^2=" << format_double(intensity) << " kappa=" << format_double(k)
        << "\n";
    return csv.flush(out, err);
}

int cmd_roc(const CLI::App *sub, std::optional<double> kappa_flag, const std::string &lambda_spec,
            const StateFlags &sf, const PerturbationFlags &pf, const CommonFlags &c, std::ostream &out,
            std::ostream &err) {
    double k;
    if (kappa_flag) {
        k = *kappa_flag;
    } else {
        StatePrep state = sf.build();
        Perturbation p = pf.build();
        k = kappa_at(state, p.intensity(), p.phase(), c);
    }
    auto lambdas = parse_grid(lambda_spec, 201);
    auto roc = roc_curve(k, lambdas);
    CsvOutput csv(sub, c);
    csv.note("kappa", format_double(k));
    csv.header("lambda,p01,p11,p11_formula");
    double worst = 0;
    for (const auto &pt : roc) {
        double formula = detection_probability(pt.false_alarm, k);
        worst = std::max(worst, std::abs(formula - pt.detection));
        csv.row(join({format_double(pt.lambda), format_double(pt.false_alarm), format_double(pt.detection),
                      format_double(formula)}));
    }
    err << "roc: kappa=" << format_double(k) << " points=" << roc.size()
        << " max|p11-formula|=" << format_double(worst) << "\n";
    return csv.flush(out, err);
}

struct ScanFlags {
    double scan_max = 50;
    double scan_step = 1e-3;
    double tol = 1e-10;

    ScanOptions options() const {
        return {scan_max, scan_step, tol};
    }
};

void add_scan_flags(CLI::App *app, ScanFlags &f) {
    app->add_option("--scan-max", f.scan_max, "largest intensity scanned");
    app->add_option("--scan-step", f.scan_step, "forward-scan step");
    app->add_option("--tol", f.tol, "bisection tolerance");
}

int cmd_min_intensity(const CLI::App *sub, const std::string &p01_spec, const ScanFlags &scan, const StateFlags &sf,
                      const PerturbationFlags &pf, const CommonFlags &c, std::ostream &out, std::ostream &err) {
    StatePrep state = sf.build();
    auto phase = phase_of(pf);
    auto p01s = parse_grid(p01_spec, 1);
    for (double p : p01s) {
        if (!(p >= 0 && p <= 1)) {
            throw DomainError("--p01 values must lie in [0, 1]");
        }
    }
    auto rows = ordered_map(p01s.size(), c.workers(), [&](std::size_t i) {
        double p01 = p01s[i];
        auto m = min_detectable_intensity([&](double x) { return kappa_at(state, x, phase, c); }, p01, scan.options());
        auto ks = critical_kappa(p01);
        auto ref = reference_for(state, phase, p01);
        return join({describe(state), phase_cell(phase), format_double(p01), ks ? format_double(*ks) : "",
                     format_double(m.intensity), format_double(m.lo), format_double(m.hi), to_string(m.method),
                     format_double(detection_probability(p01, std::min(1.0, kappa_at(state, m.intensity, phase, c)))),
                     ref ? format_double(ref->value) : "", ref ? reference_note(*ref) : ""});
    });
    CsvOutput csv(sub, c);
    csv.note("kappa_method", method_name(c));
    csv.header("state,phase,p01,kappa_star,M,lo,hi,method,p11_at_M,reference,reference_note");
    csv.rows(rows);
    err << "min-intensity: " << describe(state) << " rows=" << rows.size() << "\n";
    return csv.flush(out, err);
}

int cmd_sweep(const CLI::App *sub, const std::string &vary, const std::string &values_spec, bool log, double p01,
              const ScanFlags &scan, const StateFlags &sf, const PerturbationFlags &pf, const CommonFlags &c,
              std::ostream &out, std::ostream &err) {
    if (!(p01 >= 0 && p01 <= 1)) {
        throw DomainError("--p01 must lie in [0, 1]");
    }
    auto values = parse_grid(values_spec, 51, log);
    auto rows = ordered_map(values.size(), c.workers(), [&](std::size_t i) {
        double v = values[i];
        StateFlags s = sf;
        PerturbationFlags p = pf;
        if (vary == "intensity") {
            if (v < 0) {
                throw DomainError("intensity must be >= 0");
            }
            p.z_abs = std::sqrt(v);
        } else if (vary == "phase") {
            p.z_phase = v;
        } else if (vary == "alpha") {
            s.alpha = v;
        } else if (vary == "r") {
            s.r = v;
        } else {
            if (v != std::floor(v)) {
                throw DomainError("--vary n needs integer values");
            }
            s.n = static_cast<int>(v);
        }
        StatePrep state = s.build();
        double intensity = p.z_abs * p.z_abs;
        auto phase = phase_of(p);
        double k = kappa_at(state, intensity, phase, c);
        std::string m_cell, status;
        if (vary == "intensity") {
            status = "n/a";
        } else {
            try {
                auto m = min_detectable_intensity([&](double x) { return kappa_at(state, x, phase, c); }, p01,
                                                  scan.options());
                m_cell = format_double(m.intensity);
                status = to_string(m.method);
            } catch (const NotFoundError &) {
                status = "not-found";
            }
        }
        return join({format_double(v), describe(state), format_double(intensity), phase_cell(phase),
                     format_double(k), format_double(detection_probability(p01, k)), m_cell, status});
    });
    CsvOutput csv(sub, c);
    csv.note("kappa_method", method_name(c));
    csv.header(vary + ",state,intensity,phase,kappa,p11,M,M_status");
    csv.rows(rows);
    err << "sweep: " << vary << " points=" << rows.size() << "\n";
    return csv.flush(out, err);
}

int cmd_simulate(const CLI::App *sub, std::optional<double> kappa_flag, double p01, std::uint64_t trials,
                 double overlap_phase, const StateFlags &sf, const PerturbationFlags &pf, const CommonFlags &c,
                 std::ostream &out, std::ostream &err) {
    double k;
    if (kappa_flag) {
        k = *kappa_flag;
    } else {
        StatePrep state = sf.build();
        Perturbation p = pf.build();
        k = kappa_at(state, p.intensity(), p.phase(), c);
    }
    if (!(k >= 0 && k < 1)) {
        throw DomainError("kappa must lie in [0, 1)");
    }
    double lambda = lambda_for_false_alarm(k, p01);
    auto model = build_measurement(k, overlap_phase, lambda);
    CsvOutput csv(sub, c);
    csv.note("kappa", format_double(k));
    csv.note("lambda", format_double(lambda));
    csv.note("rng", "mt19937_64 53-bit uniform; H0 stream seed, H1 stream seed+1");
    csv.header("hypothesis,trials,accepted,frequency,model_probability,three_sigma");
    for (auto h : {Hypothesis::H0, Hypothesis::H1}) {
        std::uint64_t seed = c.seed + (h == Hypothesis::H0 ? 0 : 1);
        auto counts = simulate_decisions(model, h, trials, seed);
        double prob = h == Hypothesis::H0 ? model.operating_point.false_alarm : model.operating_point.detection;
        double sigma3 = 3 * std::sqrt(prob * (1 - prob) / static_cast<double>(trials));
        csv.row(join({h == Hypothesis::H0 ? "H0" : "H1", std::to_string(counts.trials), std::to_string(counts.accepted),
                      format_double(counts.frequency()), format_double(prob), format_double(sigma3)}));
        err << "simulate: " << (h == Hypothesis::H0 ? "H0" : "H1") << " accepted " << counts.accepted << "/"
            << counts.trials << " (model " << format_double(prob) << ")\n";
    }
    return csv.flush(out, err);
}

int cmd_drive(const CLI::App *sub, const std::string &input, double omega, double mass,
              const std::string &convention_name, const StateFlags &sf, const CommonFlags &c, std::ostream &out,
              std::ostream &err) {
    std::ifstream in(input);
    if (!in) {
        err << "error: cannot read " << input << "\n";
        return kIoError;
    }
    DriveSignal signal(read_drive_csv(in), omega, mass);
    auto convention = convention_name == "standard" ? AmplitudeConvention::Standard : AmplitudeConvention::PaperLiteral;
    auto g = gamma_integral(signal);
    complex z = perturbation_amplitude(g.value, signal, convention);
    StatePrep state = sf.build();
    double intensity = std::norm(z);
    double k = kappa_at(state, intensity, std::arg(z), c);
    CsvOutput csv(sub, c);
    csv.note("z_convention", to_string(convention));
    csv.header("samples,tau,gamma_re,gamma_im,gamma_error,rule,convention,z_re,z_im,intensity,state,kappa");
    csv.row(join({std::to_string(signal.samples().size()), format_double(signal.tau()), format_double(g.value.real()),
                  format_double(g.value.imag()), format_double(g.error),
                  g.rule == QuadratureRule::Simpson ? "simpson" : "trapezoid", to_string(convention),
                  format_double(z.real()), format_double(z.imag()), format_double(intensity), describe(state),
                  format_double(k)}));
    err << "drive: |z|^2=" << format_double(intensity) << " (" << to_string(convention) << ")\n";
    return csv.flush(out, err);
}

struct FigFlags {
    int which = 0;
    std::string p01;
    std::string kappa;
    std::string r = "0..2:21";
    std::string phase = "0..3.141592653589793:37";
    std::string intensity;
    std::string nbar = "0.1..100:31";
    std::string n = "0..20:21";
};

int cmd_fig(const CLI::App *sub, const FigFlags &f, const ScanFlags &scan, const CommonFlags &c, std::ostream &out,
            std::ostream &err) {
    CsvOutput csv(sub, c);
    std::vector<std::string> rows;
    switch (f.which) {
        case 2: {
            auto p01s = parse_grid(f.p01.empty() ? "0..1:21" : f.p01, 21);
            auto kappas = parse_grid(f.kappa.empty() ? "0..1:21" : f.kappa, 21);
            csv.header("p01,kappa,p11");
            for (double p : p01s) {
                for (double k : kappas) {
                    rows.push_back(join({format_double(p), format_double(k), format_double(detection_probability(p, k))}));
                }
            }
            break;
        }
        case 3: {
            auto rs = parse_grid(f.r, 21);
            auto phases = parse_grid(f.phase, 37);
            auto intensities = parse_grid(f.intensity.empty() ? "1" : f.intensity, 1);
            csv.note("squeeze_form", c.squeeze_form);
            csv.header("intensity,r,phase,overlap,kappa");
            for (double intensity : intensities) {
                for (double r : rs) {
                    for (double phi : phases) {
                        StatePrep s = SqueezedVacuum{r};
                        double k = kappa_at(s, intensity, phi, c);
                        rows.push_back(join({format_double(intensity), format_double(r), format_double(phi),
                                             format_double(std::sqrt(k)), format_double(k)}));
                    }
                }
            }
            break;
        }
        case 4: {
            auto p01s = parse_grid(f.p01.empty() ? "0,0.01,0.02,0.05" : f.p01, 4);
            auto nbars = parse_grid(f.nbar, 31, true);
            csv.note("state", "squeezed vacuum, random perturbation phase");
            csv.note("squeeze_form", c.squeeze_form);
            csv.note("check", "quad_delta = |kappa(M) - 256-node phase quadrature of the overlap at M|");
            csv.header("p01,nbar,r,M,lo,hi,method,p11_at_M,quad_delta,reference,reference_note");
            std::size_t cols = nbars.size();
            rows = ordered_map(p01s.size() * cols, c.workers(), [&](std::size_t idx) {
                double p01 = p01s[idx / cols];
                double nbar = nbars[idx % cols];
                if (!(nbar > 0)) {
                    throw DomainError("--nbar values must be positive");
                }
                double r = std::asinh(std::sqrt(nbar));
                StatePrep s = SqueezedVacuum{r};
                auto m = min_detectable_intensity([&](double x) { return kappa_at(s, x, std::nullopt, c); }, p01,
                                                  scan.options());
                double k = kappa_at(s, m.intensity, std::nullopt, c);
                auto ov = [&](complex z) {
                    double kz = kappa_at(s, std::norm(z), std::arg(z), c);
                    return std::sqrt(kz);
                };
                double delta = std::abs(k - phase_average_quadrature(ov, m.intensity, 256));
                auto ref = reference_scaling(ReferenceFamily::SqueezedRandomAsymptotic, {.nbar = nbar}, p01);
                return join({format_double(p01), format_double(nbar), format_double(r), format_double(m.intensity),
                             format_double(m.lo), format_double(m.hi), to_string(m.method),
                             format_double(detection_probability(p01, k)), format_double(delta),
                             format_double(ref.value), reference_note(ref)});
            });
            break;
        }
        case 5: {
            auto ns = parse_grid(f.n, 21);
            auto intensities = parse_grid(f.intensity.empty() ? "0..10:101" : f.intensity, 101);
            csv.header("n,intensity,kappa");
            for (double n : ns) {
                if (n != std::floor(n) || n < 0) {
                    throw DomainError("--n values must be non-negative integers");
                }
                for (double intensity : intensities) {
                    StatePrep s = NumberState{static_cast<int>(n)};
                    rows.push_back(join({format_double(n), format_double(intensity),
                                         format_double(kappa_at(s, intensity, 0.0, c))}));
                }
            }
            break;
        }
        default:
            throw UsageError("--which must be one of 2, 3, 4, 5");
    }
    csv.rows(rows);
    err << "fig " << f.which << ": rows=" << rows.size() << "\n";
    return csv.flush(out, err);
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Neyman-Pearson detection of displacements of a quantum harmonic oscillator", "qbd"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);

    StateFlags state;
    PerturbationFlags pert;
    CommonFlags common;
    ScanFlags scan;

    auto *overlap_cmd = app.add_subcommand("overlap", "overlap and kappa for one preparation and perturbation");
    add_state_flags(overlap_cmd, state);
    add_perturbation_flags(overlap_cmd, pert);
    add_common_flags(overlap_cmd, common);

    std::optional<double> roc_kappa;
    std::string lambda_spec = "0..20:201";
    auto *roc_cmd = app.add_subcommand("roc", "operating points of the optimal test over a multiplier grid");
    roc_cmd->add_option("--kappa", roc_kappa, "overlap strength (default: from the state flags)");
    roc_cmd->add_option("--lambda", lambda_spec, "multiplier grid");
    add_state_flags(roc_cmd, state);
    add_perturbation_flags(roc_cmd, pert);
    add_common_flags(roc_cmd, common);

    std::string min_p01 = "0";
    auto *min_cmd = app.add_subcommand("min-intensity", "minimum detectable intensity");
    min_cmd->add_option("--p01", min_p01, "false-alarm probabilities");
    add_state_flags(min_cmd, state);
    add_perturbation_flags(min_cmd, pert);
    add_scan_flags(min_cmd, scan);
    add_common_flags(min_cmd, common);

    std::string vary = "intensity";
    std::string values = "0..5:51";
    bool log_values = false;
    double sweep_p01 = 0;
    auto *sweep_cmd = app.add_subcommand("sweep", "kappa, detection and minimum intensity along one parameter");
    sweep_cmd->add_option("--vary", vary, "intensity | phase | alpha | r | n")
        ->check(CLI::IsMember({"intensity", "phase", "alpha", "r", "n"}));
    sweep_cmd->add_option("--values", values, "grid for the varied parameter");
    sweep_cmd->add_flag("--log", log_values, "log-spaced ranges");
    sweep_cmd->add_option("--p01", sweep_p01, "false-alarm probability");
    add_state_flags(sweep_cmd, state);
    add_perturbation_flags(sweep_cmd, pert);
    add_scan_flags(sweep_cmd, scan);
    add_common_flags(sweep_cmd, common);

    std::optional<double> sim_kappa;
    double sim_p01 = 0.05;
    std::uint64_t trials = 100000;
    double overlap_phase = 0;
    auto *sim_cmd = app.add_subcommand("simulate", "Monte Carlo run of the optimal test");
    sim_cmd->add_option("--kappa", sim_kappa, "overlap strength (default: from the state flags)");
    sim_cmd->add_option("--p01", sim_p01, "target false-alarm probability");
    sim_cmd->add_option("--trials", trials, "trials per hypothesis")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--overlap-phase", overlap_phase, "arg <psi0|psi1>");
    add_state_flags(sim_cmd, state);
    add_perturbation_flags(sim_cmd, pert);
    add_common_flags(sim_cmd, common);

    std::string input;
    double omega = 1, mass = 1;
    std::string convention = "paper-literal";
    auto *drive_cmd = app.add_subcommand("drive", "displacement produced by a sampled force record");
    drive_cmd->add_option("--input", input, "two-column CSV (t, F)")->required();
    drive_cmd->add_option("--omega", omega, "angular frequency");
    drive_cmd->add_option("--mass", mass, "oscillator mass");
    drive_cmd->add_option("--convention", convention, "paper-literal | standard")
        ->check(CLI::IsMember({"paper-literal", "standard"}));
    add_state_flags(drive_cmd, state);
    add_common_flags(drive_cmd, common);

    FigFlags fig;
    auto *fig_cmd = app.add_subcommand("fig", "CSV grids behind the figures");
    fig_cmd->add_option("--which", fig.which, "2 | 3 | 4 | 5")->required();
    fig_cmd->add_option("--p01", fig.p01, "false-alarm grid (fig 2, 4)");
    fig_cmd->add_option("--kappa", fig.kappa, "kappa grid (fig 2)");
    fig_cmd->add_option("--r", fig.r, "squeezing grid (fig 3)");
    fig_cmd->add_option("--phase", fig.phase, "phase grid (fig 3)");
    fig_cmd->add_option("--intensity", fig.intensity, "intensity grid (fig 3, 5)");
    fig_cmd->add_option("--nbar", fig.nbar, "mean excitation grid, log spaced (fig 4)");
    fig_cmd->add_option("--n", fig.n, "Fock index grid (fig 5)");
    add_scan_flags(fig_cmd, scan);
    add_common_flags(fig_cmd, common);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    }

    const CLI::App *sub = app.get_subcommands().front();
    try {
        if (sub == overlap_cmd) {
            return cmd_overlap(sub, state, pert, common, out, err);
        }
        if (sub == roc_cmd) {
            return cmd_roc(sub, roc_kappa, lambda_spec, state, pert, common, out, err);
        }
        if (sub == min_cmd) {
            return cmd_min_intensity(sub, min_p01, scan, state, pert, common, out, err);
        }
        if (sub == sweep_cmd) {
            return cmd_sweep(sub, vary, values, log_values, sweep_p01, scan, state, pert, common, out, err);
        }
        if (sub == sim_cmd) {
            return cmd_simulate(sub, sim_kappa, sim_p01, trials, overlap_phase, state, pert, common, out, err);
        }
        if (sub == drive_cmd) {
            return cmd_drive(sub, input, omega, mass, convention, state, common, out, err);
        }
        return cmd_fig(sub, fig, scan, common, out, err);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const ConvergenceError &e) {
        err << "convergence error: " << e.what();
        if (e.suggested_dim() > 0) {
            err << " (try --dim " << e.suggested_dim() << ")";
        }
        err << "\n";
        return kNumericalError;
    } catch (const NotFoundError &e) {
        err << "not found: " << e.what() << " (raise --scan-max beyond " << format_double(e.scanned_max()) << ")\n";
        return kNumericalError;
    } catch (const TruncationError &e) {
        err << "truncation error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const DomainError &e) {
        err << "domain error: " << e.what() << "\n";
        return kDomainError;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    }
}

}  // namespace qbd::cli
