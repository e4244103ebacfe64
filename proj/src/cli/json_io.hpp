#pragma once

// JSON encoding of library values. Complex scalars are [re, im] (a bare
// number is accepted on input), matrices [[a, b], [c, d]], tuples
// {"n", "matrices", "sl2"}.

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sl2orbit/core.hpp"
#include "sl2orbit/magnus.hpp"
#include "sl2orbit/structure.hpp"

namespace sl2orbit::cli {

using ojson = nlohmann::ordered_json;

/// A library error tied to a location in the request.
class InputError : public std::runtime_error {
public:
    InputError(ErrorKind kind, std::string path, const std::string& what)
        : std::runtime_error(what), kind_(kind), path_(std::move(path)) {}
    ErrorKind kind() const { return kind_; }
    const std::string& path() const { return path_; }

private:
    ErrorKind kind_;
    std::string path_;
};

Complex parse_complex(const ojson& v, const std::string& path);
std::vector<Complex> parse_complex_list(const ojson& v, const std::string& path);
Mat2 parse_matrix(const ojson& v, const std::string& path);
Tuple parse_tuple(const ojson& v, const std::string& path, double tol);

ojson encode(Complex x);
ojson encode(const Mat2& m);
ojson encode(const Tuple& t);
ojson encode(const std::vector<Complex>& v);
ojson encode(const StabilityWitness& w);
ojson encode(const Fiber& f);

}  // namespace sl2orbit::cli
