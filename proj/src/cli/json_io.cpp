#include "json_io.hpp"

#include <cmath>

namespace sl2orbit::cli {

Complex parse_complex(const ojson& v, const std::string& path) {
    Complex x;
    if (v.is_number()) {
        x = v.get<double>();
    } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        x = {v[0].get<double>(), v[1].get<double>()};
    } else {
        throw InputError(ErrorKind::InvalidInput, path, "expected a complex scalar [re, im]");
    }
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
        throw InputError(ErrorKind::InvalidInput, path, "complex scalar is not finite");
    }
    return x;
}

std::vector<Complex> parse_complex_list(const ojson& v, const std::string& path) {
    if (!v.is_array()) throw InputError(ErrorKind::InvalidInput, path, "expected an array");
    std::vector<Complex> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_complex(v[i], path + "/" + std::to_string(i)));
    return out;
}

Mat2 parse_matrix(const ojson& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_array() || !v[1].is_array() || v[0].size() != 2 ||
        v[1].size() != 2) {
        throw InputError(ErrorKind::InvalidInput, path, "expected a 2x2 matrix");
    }
    return {parse_complex(v[0][0], path + "/0/0"), parse_complex(v[0][1], path + "/0/1"),
            parse_complex(v[1][0], path + "/1/0"), parse_complex(v[1][1], path + "/1/1")};
}

Tuple parse_tuple(const ojson& v, const std::string& path, double tol) {
    if (!v.is_object() || !v.contains("matrices")) {
        throw InputError(ErrorKind::InvalidInput, path, "expected a tuple object with \"matrices\"");
    }
    const ojson& mats = v["matrices"];
    if (!mats.is_array() || mats.empty()) {
        throw InputError(ErrorKind::InvalidInput, path + "/matrices", "expected a nonempty array");
    }
    std::vector<Mat2> m;
    for (std::size_t i = 0; i < mats.size(); ++i) m.push_back(parse_matrix(mats[i], path + "/matrices/" + std::to_string(i)));
    if (v.contains("n") && v["n"].get<std::size_t>() != m.size()) {
        throw InputError(ErrorKind::InvalidInput, path + "/n",
                         "n = " + v["n"].dump() + " but " + std::to_string(m.size()) + " matrices given");
    }
    Tuple t(std::move(m), tol);
    if (v.contains("sl2")) {
        const bool claimed = v["sl2"].get<bool>();
        if (claimed && !t.sl2()) {
            throw InputError(ErrorKind::NotSL2, path + "/sl2", "sl2 is true but some determinant differs from 1");
        }
        if (!claimed) t = Tuple::with_flag({t.entries().begin(), t.entries().end()}, false);
    }
    return t;
}

ojson encode(Complex x) { return ojson::array({x.real(), x.imag()}); }

ojson encode(const Mat2& m) {
    return ojson::array({ojson::array({encode(m.a), encode(m.b)}), ojson::array({encode(m.c), encode(m.d)})});
}

ojson encode(const Tuple& t) {
    ojson mats = ojson::array();
    for (const Mat2& m : t.entries()) mats.push_back(encode(m));
    ojson out;
    out["n"] = t.size();
    out["matrices"] = std::move(mats);
    out["sl2"] = t.sl2();
    return out;
}

ojson encode(const std::vector<Complex>& v) {
    ojson out = ojson::array();
    for (Complex x : v) out.push_back(encode(x));
    return out;
}

ojson encode(const StabilityWitness& w) {
    ojson out;
    out["kind"] = w.kind == StabilityWitness::Kind::Sigma ? "sigma" : "delta";
    ojson idx = ojson::array({w.indices[0], w.indices[1]});
    if (w.kind == StabilityWitness::Kind::Delta) idx.push_back(w.indices[2]);
    out["indices"] = std::move(idx);
    out["value"] = encode(w.value);
    out["description"] = w.describe();
    return out;
}

namespace {

ojson encode_orbit(const FiberOrbit& o) {
    ojson out;
    out["signs"] = o.signs;
    out["residual"] = o.residual;
    out["tuple"] = encode(o.representative);
    return out;
}

}  // namespace

ojson encode(const Fiber& f) {
    ojson out;
    out["status"] = to_string(f.status);
    out["notes"] = f.notes;
    ojson orbits = ojson::array();
    for (const auto& o : f.orbits) orbits.push_back(encode_orbit(o));
    out["orbit_count"] = f.orbits.size();
    out["orbits"] = std::move(orbits);
    out["witness"] = f.witness ? encode_orbit(*f.witness) : ojson(nullptr);
    out["obstruction"] = f.obstruction ? ojson::array({(*f.obstruction)[0], (*f.obstruction)[1]}) : ojson(nullptr);
    return out;
}

}  // namespace sl2orbit::cli
