#include "sl2orbit/cli.hpp"

#include <chrono>
#include <functional>
#include <map>

#include "json_io.hpp"
#include "schema.hpp"
#include "schemas.hpp"
#include "sl2orbit/invariants.hpp"
#include "sl2orbit/magnus.hpp"
#include "sl2orbit/structure.hpp"

namespace sl2orbit::cli {

namespace {

using nlohmann::json;

struct Settings {
    double tol = kDefaultTol;
    double tol_branch = 1e-8;
    std::uint64_t seed = 0;
    std::size_t samples = 200;

    MagnusOptions magnus() const {
        MagnusOptions o;
        o.tol = tol;
        o.tol_branch = tol_branch;
        return o;
    }
};

struct Job {
    const ojson& request;
    Settings settings;

    Tuple tuple(const char* key = "tuple") const {
        if (!request.contains(key)) {
            throw InputError(ErrorKind::InvalidInput, std::string("/") + key, "this command needs a tuple");
        }
        return parse_tuple(request[key], std::string("/") + key, settings.tol);
    }

    Tuple sl2_tuple() const {
        Tuple t = tuple();
        if (!t.sl2()) throw InputError(ErrorKind::NotSL2, "/tuple", "this command needs an SL2 tuple");
        return t;
    }

    std::size_t n() const {
        if (!request.contains("n")) throw InputError(ErrorKind::InvalidInput, "/n", "this command needs n");
        return request["n"].get<std::size_t>();
    }

    std::vector<Complex> z() const {
        if (!request.contains("z")) throw InputError(ErrorKind::InvalidInput, "/z", "this command needs z");
        return parse_complex_list(request["z"], "/z");
    }
};

// Wraps library constructors that validate coordinate vectors so that the
// error points at /z.
template <class F>
auto at_path(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NumericalFailure) throw;
        throw InputError(e.kind(), path, e.what());
    }
}

ojson optional_witness(const std::optional<StabilityWitness>& w) {
    return w ? encode(*w) : ojson(nullptr);
}

ojson cmd_invariants(const Job& job) {
    const Tuple A = job.tuple();
    const std::size_t n = A.size();
    ojson r;
    r["n"] = n;
    r["sl2"] = A.sl2();
    const auto diag = validate_tuple(A.entries(), job.settings.tol);
    r["det_residuals"] = diag.det_residuals;

    ojson tau_m = ojson::array();
    for (std::size_t j = 1; j <= n; ++j) {
        ojson row = ojson::array();
        for (std::size_t k = 1; k <= n; ++k) row.push_back(encode(tau(A, j, k)));
        tau_m.push_back(std::move(row));
    }
    r["tau"] = std::move(tau_m);
    ojson nus = ojson::array();
    for (std::size_t j = 1; j <= n; ++j) nus.push_back(encode(nu(A, j)));
    r["nu"] = std::move(nus);

    ojson sig = ojson::array();
    for (std::size_t j = 1; j <= n; ++j)
        for (std::size_t k = j + 1; k <= n; ++k) {
            sig.push_back({{"indices", {j, k}}, {"value", encode(sigma(A, j, k))}});
        }
    r["sigma"] = std::move(sig);

    ojson del = ojson::array();
    ojson grams = ojson::array();
    for (std::size_t j = 1; j <= n; ++j)
        for (std::size_t k = j + 1; k <= n; ++k)
            for (std::size_t l = k + 1; l <= n; ++l) {
                del.push_back({{"indices", {j, k, l}}, {"value", encode(delta(A, j, k, l))}});
                const GramMatrix3 g = gram(A, j, k, l);
                ojson m = ojson::array();
                for (const auto& row : g.m) {
                    ojson rr = ojson::array();
                    for (Complex x : row) rr.push_back(encode(x));
                    m.push_back(std::move(rr));
                }
                grams.push_back({{"indices", {j, k, l}},
                                 {"matrix", std::move(m)},
                                 {"leading_minor", encode(g.leading_minor())},
                                 {"determinant", encode(g.determinant())}});
            }
    r["delta"] = std::move(del);
    r["gram"] = std::move(grams);

    if (A.sl2()) {
        const Fingerprint fp = fingerprint(A);
        ojson words = ojson::array();
        for (const Word& w : Fingerprint::words(n)) words.push_back(w.to_string());
        r["fingerprint"] = {{"words", std::move(words)}, {"values", encode(fp.values)}};
    } else {
        r["fingerprint"] = nullptr;
    }
    return r;
}

ojson cmd_stability(const Job& job) {
    const auto v = is_stable(job.tuple(), job.settings.tol);
    return {{"stable", v.stable}, {"witness", optional_witness(v.witness)}};
}

ojson cmd_irreducible(const Job& job) {
    const auto v = is_irreducible(job.sl2_tuple(), job.settings.tol);
    return {{"irreducible", v.stable}, {"witness", optional_witness(v.witness)}};
}

ojson cmd_triangularize(const Job& job) {
    const Tuple A = job.tuple();
    const auto t = triangularize(A, job.settings.tol);
    ojson r;
    r["triangularizable"] = t.triangularizable;
    r["witness"] = optional_witness(t.witness);
    if (t.conjugator) {
        const Tuple B = conjugate_tuple(*t.conjugator, A, job.settings.tol);
        double lower = 0.0;
        for (const Mat2& m : B.entries()) lower = std::max(lower, std::abs(m.c));
        r["conjugator"] = encode(*t.conjugator);
        r["conjugated"] = encode(B);
        r["max_lower_left"] = lower;
    } else {
        r["conjugator"] = nullptr;
        r["conjugated"] = nullptr;
        r["max_lower_left"] = nullptr;
    }
    return r;
}

ojson cmd_normal_form(const Job& job) {
    const Tuple A = job.tuple();
    const NormalForm nf = transposition_normal_form(A, job.settings.tol);
    double asym = 0.0;
    for (std::size_t j = 1; j <= 2; ++j) asym = std::max(asym, std::abs(nf.tuple[j].b - nf.tuple[j].c));
    return {{"shape", to_string(nf.shape)},
            {"conjugator", encode(nf.conjugator)},
            {"tuple", encode(nf.tuple)},
            {"parameter", encode(nf.parameter)},
            {"symmetry_residual", asym}};
}

ojson cmd_fix_generators(const Job& job) {
    const Tuple A = job.sl2_tuple();
    const FixedGenerators fg = fix_generators(A, job.settings.tol);
    ojson moves = ojson::array();
    for (const auto& mv : fg.change.moves()) {
        ojson m;
        m["kind"] = mv.kind == GeneratorMove::Kind::Transpose ? "transpose" : "shift";
        m["j"] = mv.j;
        m["k"] = mv.k;
        if (mv.kind == GeneratorMove::Kind::Shift) m["exponent"] = mv.exponent;
        m["description"] = mv.describe();
        moves.push_back(std::move(m));
    }
    ojson images = ojson::array();
    for (const Word& w : fg.change.images(A.size())) images.push_back(w.to_string());
    return {{"tuple", encode(fg.tuple)},
            {"moves", std::move(moves)},
            {"images", std::move(images)},
            {"sigma12", encode(sigma(fg.tuple, 1, 2))},
            {"nu1", encode(nu(fg.tuple, 1))}};
}

ojson cmd_conjugator(const Job& job) {
    const Tuple A = job.tuple();
    const Tuple B = job.tuple("tuple_b");
    if (A.size() != B.size()) {
        throw InputError(ErrorKind::InvalidInput, "/tuple_b", "tuples have different lengths");
    }
    const auto g = conjugator(A, B, job.settings.tol);
    ojson r;
    r["found"] = g.has_value();
    if (g) {
        double res = 0.0;
        for (std::size_t j = 1; j <= A.size(); ++j) res = std::max(res, ((*g) * A[j] - B[j] * (*g)).norm());
        r["conjugator"] = encode(*g);
        r["residual"] = res;
    } else {
        r["conjugator"] = nullptr;
        r["residual"] = nullptr;
    }
    return r;
}

ojson cmd_magnus_forward(const Job& job) {
    const TraceVector z = forward_Tn(job.sl2_tuple());
    return {{"n", z.n()}, {"z", encode(z.coords())}};
}

ojson cmd_magnus_invert(const Job& job) {
    const std::size_t n = job.n();
    const auto coords = job.z();
    const TraceVector z = at_path("/z", [&] { return TraceVector(n, coords); });
    const Fiber f = invert_Tn(z, job.settings.magnus());
    ojson r = encode(f);
    r["sigma12"] = encode(sigma_z(z, 1, 2));
    return r;
}

ojson cmd_fiber_check(const Job& job) {
    const Tuple A = job.sl2_tuple();
    if (A.size() < 2) throw InputError(ErrorKind::InvalidInput, "/tuple", "needs n >= 2");
    const CrossCheckReport c = fiber_cross_check(A, job.settings.magnus());
    ojson r;
    r["passed"] = c.passed;
    r["z"] = encode(c.z.coords());
    r["matches"] = c.matches;
    r["matched_orbit"] = c.matched_orbit ? ojson(*c.matched_orbit) : ojson(nullptr);
    r["max_residual"] = c.max_residual;
    r["failures"] = c.failures;
    r["fiber"] = encode(c.fiber);
    return r;
}

ojson cmd_vn_forward(const Job& job) {
    const Tuple A = job.tuple();
    if (A.size() < 2) throw InputError(ErrorKind::InvalidInput, "/tuple", "needs n >= 2");
    const TraceVectorVn z = forward_That_n(A);
    return {{"n", z.n()}, {"z", encode(z.coords())}};
}

ojson cmd_vn_invert(const Job& job) {
    const std::size_t n = job.n();
    const auto coords = job.z();
    const TraceVectorVn z = at_path("/z", [&] { return TraceVectorVn(n, coords); });
    const Fiber f = invert_That_n(z, job.settings.magnus());
    ojson r = encode(f);
    ojson deltas = ojson::array();
    for (std::size_t k = 3; k <= n; ++k) deltas.push_back(encode(delta_12k_z(z, k)));
    r["delta_12k"] = std::move(deltas);
    return r;
}

ojson cmd_cs_sample(const Job& job) {
    const Tuple A = job.sl2_tuple();
    const auto ev = culler_shalen_sample(A, job.settings.samples, job.settings.seed);
    return {{"verdict", to_string(ev.verdict)},
            {"samples", ev.samples},
            {"seed", job.settings.seed},
            {"max_deviation", ev.max_deviation},
            {"witness", ev.witness ? ojson(ev.witness->to_string()) : ojson(nullptr)}};
}

ojson cmd_sample(const Job& job) {
    const std::size_t n = job.n();
    const std::size_t count = job.request.contains("count") ? job.request["count"].get<std::size_t>() : 1;
    const std::string kind = job.request.contains("kind") ? job.request["kind"].get<std::string>() : "sl2";
    RandomStream rs(job.settings.seed);
    ojson tuples = ojson::array();
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<Mat2> m;
        for (std::size_t j = 0; j < n; ++j) m.push_back(kind == "sl2" ? rs.sl2() : rs.matrix());
        tuples.push_back(encode(kind == "sl2" ? Tuple::with_flag(std::move(m), true) : Tuple(std::move(m))));
    }
    return {{"kind", kind}, {"seed", job.settings.seed}, {"tuples", std::move(tuples)}};
}

using Handler = std::function<ojson(const Job&)>;

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h{
        {"invariants", cmd_invariants},
        {"stability", cmd_stability},
        {"irreducible", cmd_irreducible},
        {"triangularize", cmd_triangularize},
        {"normal-form", cmd_normal_form},
        {"fix-generators", cmd_fix_generators},
        {"conjugator", cmd_conjugator},
        {"magnus-forward", cmd_magnus_forward},
        {"magnus-invert", cmd_magnus_invert},
        {"magnus-fiber-check", cmd_fiber_check},
        {"vn-forward", cmd_vn_forward},
        {"vn-invert", cmd_vn_invert},
        {"cs-sample", cmd_cs_sample},
        {"sample", cmd_sample},
    };
    return h;
}

Settings resolve_settings(const ojson& request, const Flags& flags) {
    Settings s;
    if (request.contains("options")) {
        const ojson& o = request["options"];
        if (o.contains("tol")) s.tol = o["tol"].get<double>();
        if (o.contains("tol_branch")) s.tol_branch = o["tol_branch"].get<double>();
        if (o.contains("seed")) s.seed = o["seed"].get<std::uint64_t>();
        if (o.contains("samples")) s.samples = o["samples"].get<std::size_t>();
    }
    if (flags.tol) s.tol = *flags.tol;
    if (flags.tol_branch) s.tol_branch = *flags.tol_branch;
    if (flags.seed) s.seed = *flags.seed;
    if (flags.samples) s.samples = *flags.samples;
    return s;
}

Outcome error_outcome(const std::string& command, ErrorKind kind, const std::string& path,
                      const std::string& message) {
    ojson out;
    out["command"] = command;
    out["version"] = kVersion;
    out["error"] = {{"kind", to_string(kind)}, {"message", message}, {"path", path}};
    return {kind == ErrorKind::NumericalFailure ? 2 : 1, out.dump(2) + "\n"};
}

}  // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, _] : handlers()) v.push_back(name);
        return v;
    }();
    return names;
}

const std::string& request_schema() {
    static const std::string s = embedded::kRequestSchema;
    return s;
}

const std::string& report_schema() {
    static const std::string s = embedded::kReportSchema;
    return s;
}

Outcome run(const std::string& command, const std::string& request_text, const Flags& flags) {
    const auto start = std::chrono::steady_clock::now();
    const auto handler = handlers().find(command);
    if (handler == handlers().end()) {
        return error_outcome(command, ErrorKind::InvalidInput, "", "unknown command \"" + command + "\"");
    }

    ojson request;
    try {
        request = ojson::parse(request_text);
    } catch (const nlohmann::json::parse_error& e) {
        return error_outcome(command, ErrorKind::InvalidInput, "", std::string("invalid JSON: ") + e.what());
    }
    static const json schema = json::parse(request_schema());
    if (auto v = validate(json::parse(request_text), schema)) {
        return error_outcome(command, ErrorKind::InvalidInput, v->path, v->message);
    }
    if (request.contains("command") && request["command"].get<std::string>() != command) {
        return error_outcome(command, ErrorKind::InvalidInput, "/command",
                             "request names command \"" + request["command"].get<std::string>() +
                                 "\" but \"" + command + "\" was invoked");
    }

    ojson result;
    try {
        const Job job{request, resolve_settings(request, flags)};
        result = handler->second(job);
    } catch (const InputError& e) {
        return error_outcome(command, e.kind(), e.path(), e.what());
    } catch (const Error& e) {
        return error_outcome(command, e.kind(), "", e.what());
    } catch (const nlohmann::json::exception& e) {
        return error_outcome(command, ErrorKind::InvalidInput, "", e.what());
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    ojson out;
    out["command"] = command;
    out["version"] = kVersion;
    out["input"] = request;
    out["result"] = std::move(result);
    out["timing_ms"] = ms;
    return {0, out.dump(2) + "\n"};
}

std::string check_report(const std::string& report_text) {
    static const json schema = json::parse(report_schema());
    json report;
    try {
        report = json::parse(report_text);
    } catch (const nlohmann::json::parse_error& e) {
        return std::string(": ") + e.what();
    }
    if (auto v = validate(report, schema)) return v->path + ": " + v->message;
    return "";
}

}  // namespace sl2orbit::cli
