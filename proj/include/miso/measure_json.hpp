#pragma once

// JSON (de)serialization for operator measures.
//
// Schema:
//   {
//     "dim": d,
//     "atoms":   [{"angle_over_pi": x, "weight_real": M, "weight_imag": M}],
//     "density": [{"n": k, "coeff_real": M, "coeff_imag": M}]
//   }
// where M is either a plain number (dim 1) or a d x d array of arrays.
// "weight_imag"/"coeff_imag" may be omitted (zero imaginary part), and
// density entries for negative n may be omitted: they are filled in by
// conjugate symmetry D(-n) = D(n)^*.

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "miso/measures.hpp"

namespace miso::measures {

namespace detail {

inline double number_at(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number()) {
    throw std::runtime_error("measure json: expected a number at " + where);
  }
  return j.get<double>();
}

inline Eigen::MatrixXd real_matrix_part(const nlohmann::json& j, int dim,
                                        const std::string& where) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  if (j.is_number()) {
    if (dim != 1) {
      throw std::runtime_error("measure json: scalar entry " + where +
                               " is only allowed when dim == 1");
    }
    out(0, 0) = j.get<double>();
    return out;
  }
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw std::runtime_error("measure json: " + where + " must be a " +
                             std::to_string(dim) + "x" + std::to_string(dim) +
                             " array");
  }
  for (int r = 0; r < dim; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw std::runtime_error("measure json: row " + std::to_string(r) +
                               " of " + where + " has the wrong length");
    }
    for (int c = 0; c < dim; ++c) {
      out(r, c) = number_at(row[c], where + "[" + std::to_string(r) + "][" +
                                        std::to_string(c) + "]");
    }
  }
  return out;
}

inline Matrix complex_matrix(const nlohmann::json& obj, int dim,
                             const std::string& real_key,
                             const std::string& imag_key,
                             const std::string& where) {
  if (!obj.contains(real_key)) {
    throw std::runtime_error("measure json: missing " + real_key + " in " +
                             where);
  }
  Eigen::MatrixXd re = real_matrix_part(obj.at(real_key), dim, where + "." + real_key);
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(dim, dim);
  if (obj.contains(imag_key)) {
    im = real_matrix_part(obj.at(imag_key), dim, where + "." + imag_key);
  }
  Matrix out(dim, dim);
  out.real() = re;
  out.imag() = im;
  return out;
}

inline nlohmann::json matrix_part_to_json(const Eigen::MatrixXd& m) {
  if (m.rows() == 1 && m.cols() == 1) return m(0, 0);
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

inline OperatorMeasure measure_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::runtime_error("measure json: root must be an object");
  if (!j.contains("dim")) throw std::runtime_error("measure json: missing dim");
  if (!j.at("dim").is_number_integer() || j.at("dim").get<int>() < 1) {
    throw std::runtime_error("measure json: dim must be a positive integer");
  }
  const int dim = j.at("dim").get<int>();

  std::vector<OperatorMeasure::Atom> atoms;
  if (j.contains("atoms")) {
    const auto& arr = j.at("atoms");
    if (!arr.is_array()) throw std::runtime_error("measure json: atoms must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& a = arr[i];
      const std::string where = "atoms[" + std::to_string(i) + "]";
      if (!a.is_object() || !a.contains("angle_over_pi")) {
        throw std::runtime_error("measure json: " + where +
                                 " needs angle_over_pi");
      }
      OperatorMeasure::Atom atom;
      atom.angle_over_pi = detail::number_at(a.at("angle_over_pi"),
                                             where + ".angle_over_pi");
      atom.weight =
          detail::complex_matrix(a, dim, "weight_real", "weight_imag", where);
      atoms.push_back(std::move(atom));
    }
  }

  std::map<int, Matrix> density;
  if (j.contains("density")) {
    const auto& arr = j.at("density");
    if (!arr.is_array()) throw std::runtime_error("measure json: density must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& e = arr[i];
      const std::string where = "density[" + std::to_string(i) + "]";
      if (!e.is_object() || !e.contains("n") || !e.at("n").is_number_integer()) {
        throw std::runtime_error("measure json: " + where +
                                 " needs an integer n");
      }
      const int n = e.at("n").get<int>();
      if (density.count(n)) {
        throw std::runtime_error("measure json: duplicate density entry n = " +
                                 std::to_string(n));
      }
      density[n] =
          detail::complex_matrix(e, dim, "coeff_real", "coeff_imag", where);
    }
    // Fill omitted negative coefficients by conjugate symmetry.
    for (const auto& [n, c] : std::map<int, Matrix>(density)) {
      if (n > 0 && !density.count(-n)) density[-n] = c.adjoint();
    }
  }

  return OperatorMeasure(dim, std::move(atoms), std::move(density));
}

inline nlohmann::json measure_to_json(const OperatorMeasure& mu) {
  nlohmann::json j;
  j["dim"] = mu.dim();
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : mu.atoms()) {
    nlohmann::json e;
    e["angle_over_pi"] = a.angle_over_pi;
    e["weight_real"] = detail::matrix_part_to_json(a.weight.real());
    e["weight_imag"] = detail::matrix_part_to_json(a.weight.imag());
    atoms.push_back(std::move(e));
  }
  j["atoms"] = std::move(atoms);
  nlohmann::json density = nlohmann::json::array();
  for (const auto& [n, c] : mu.density()) {
    if (n < 0) continue;  // negatives are implied by conjugate symmetry
    nlohmann::json e;
    e["n"] = n;
    e["coeff_real"] = detail::matrix_part_to_json(c.real());
    e["coeff_imag"] = detail::matrix_part_to_json(c.imag());
    density.push_back(std::move(e));
  }
  j["density"] = std::move(density);
  return j;
}

}  // namespace miso::measures
