#pragma once

#include <string>

#include "json.hpp"
#include "poslab/boundary.hpp"
#include "poslab/tripods.hpp"
#include "poslab/weyl.hpp"

namespace poslab {

using Json = nlohmann::ordered_json;

/// Rationals are written as strings "p/q" (or "p"); on input both strings and
/// JSON numbers are accepted (numbers are read exactly from their binary value).
Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

/// Matrices are arrays of rows.
Json to_json(const MatrixQ& m);
Json to_json(const MatrixD& m);
MatrixQ matrix_q_from_json(const Json& j);
MatrixD matrix_d_from_json(const Json& j);

/// {"n": n, "mode": "exact"|"float", "basis": rows}; input also accepts a bare matrix.
Json to_json(const FlagQ& f);
Json to_json(const FlagD& f);
FlagQ flag_q_from_json(const Json& j);
FlagD flag_d_from_json(const Json& j);

/// One-line notation, 1-based: [w(1), ..., w(n)].
Json to_json(const Perm& p);
Json to_json(const CellLabel& c);
Json to_json(const SignClass& sc);
template <class T>
Json to_json(const Certificate<T>& c);

Json to_json(const CyclicSample<double>& s);
CyclicSample<double> cyclic_sample_from_json(const Json& j);

/// Stores the exact defining data; images are recomputed on load.
Json to_json(const SchottkyRep& r);
SchottkyRep schottky_from_json(const Json& j);

/// Reads a whole file; throws ConfigInvalid on I/O or parse errors.
Json read_json_file(const std::string& path);

}  // namespace poslab
