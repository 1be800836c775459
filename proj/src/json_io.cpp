#include "walpert/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace walpert {

namespace {

using nlohmann::json;

Rat num_from_json(const json& v) {
  if (v.is_string()) return rat_from_string(v.get<std::string>());
  if (v.is_number_integer()) return Rat(static_cast<long>(v.get<long long>()));
  if (v.is_number_float()) return Rat(v.get<double>());  // doubles are exact rationals
  if (v.is_object() && v.contains("num") && v.contains("den")) {
    Rat q = num_from_json(v.at("num")) / num_from_json(v.at("den"));
    q.canonicalize();
    return q;
  }
  throw ParseError("expected a number, string, or {num,den} object");
}

json num_to_json(const Rat& q) {
  if (q.get_den() == 1 && mpz_fits_slong_p(q.get_num_mpz_t()))
    return json(q.get_num().get_si());
  return json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

}  // namespace

Measure measure_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("measure spec: ") + e.what());
  }
  try {
    std::vector<Measure::Atom> atoms;
    std::vector<Measure::Piece> pieces;
    for (const auto& a : j.value("atoms", json::array()))
      atoms.push_back({num_from_json(a.at("x")), num_from_json(a.at("mass"))});
    for (const auto& p : j.value("pieces", json::array())) {
      Poly<Rat> coeffs;
      for (const auto& c : p.at("coeffs")) coeffs.push_back(num_from_json(c));
      pieces.push_back({Interval(num_from_json(p.at("a")), num_from_json(p.at("b"))),
                        std::move(coeffs)});
    }
    Arithmetic mode = Arithmetic::Exact;
    std::string ms = j.value("mode", "exact");
    if (ms == "float")
      mode = Arithmetic::Float;
    else if (ms != "exact")
      throw ParseError("mode must be \"exact\" or \"float\"");
    return Measure(std::move(atoms), std::move(pieces), mode);
  } catch (const json::exception& e) {
    throw ParseError(std::string("measure spec: ") + e.what());
  }
}

Measure measure_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open measure file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return measure_from_json(ss.str());
}

std::string measure_to_json(const Measure& m) {
  json j;
  j["atoms"] = json::array();
  for (const auto& a : m.atoms())
    j["atoms"].push_back({{"x", num_to_json(a.x)}, {"mass", num_to_json(a.mass)}});
  j["pieces"] = json::array();
  for (const auto& p : m.pieces()) {
    json coeffs = json::array();
    for (const auto& c : p.density) coeffs.push_back(num_to_json(c));
    j["pieces"].push_back({{"a", num_to_json(p.span.a)},
                           {"b", num_to_json(p.span.b)},
                           {"coeffs", coeffs}});
  }
  j["mode"] = m.mode() == Arithmetic::Exact ? "exact" : "float";
  return j.dump(2);
}

}  // namespace walpert
