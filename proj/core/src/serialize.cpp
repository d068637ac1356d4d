#include "qmb/serialize.hpp"

#include <json.hpp>

#include "qmb/errors.hpp"

namespace qmb {

namespace {

using nlohmann::json;

json real_rows(const CMat& m, bool imag) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c)
      row.push_back(imag ? m(r, c).imag() : m(r, c).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

json mat_to_json(const CMat& m) {
  return json{{"re", real_rows(m, false)}, {"im", real_rows(m, true)}};
}

RMat real_part_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw Error::parse(where + ": expected a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  RMat m;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.empty())
      throw Error::parse(where + ": expected rows of numbers");
    if (r == 0) {
      cols = row.size();
      m.resize(static_cast<Index>(rows), static_cast<Index>(cols));
    } else if (row.size() != cols) {
      throw Error::parse(where + ": ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number()) throw Error::parse(where + ": non-numeric entry");
      m(static_cast<Index>(r), static_cast<Index>(c)) = row[c].get<double>();
    }
  }
  return m;
}

CMat mat_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw Error::parse(where + ": expected an object with \"re\" and \"im\" arrays");
  const RMat re = real_part_from_json(j["re"], where + ".re");
  const RMat im = real_part_from_json(j["im"], where + ".im");
  if (re.rows() != im.rows() || re.cols() != im.cols())
    throw Error::parse(where + ": \"re\" and \"im\" shapes differ");
  return re.cast<std::complex<double>>() + ci * im.cast<std::complex<double>>();
}

Index positive_dim(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw Error::parse("channel document: missing integer \"" + key + "\"");
  const long long v = j[key].get<long long>();
  if (v < 1) throw Error::parse("channel document: \"" + key + "\" must be >= 1");
  return static_cast<Index>(v);
}

}  // namespace

Channel channel_from_json(const std::string& text, const Tolerances& tol) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error::parse(std::string("channel document: ") + e.what());
  }
  if (!doc.is_object()) throw Error::parse("channel document: expected a JSON object");

  const Index d_in = positive_dim(doc, "d_in");
  const Index d_out = positive_dim(doc, "d_out");
  if (!doc.contains("phi0") || !doc["phi0"].is_number())
    throw Error::parse("channel document: missing numeric \"phi0\"");
  const double phi0 = doc["phi0"].get<double>();

  if (!doc.contains("kraus") || !doc["kraus"].is_array() || doc["kraus"].empty())
    throw Error::parse("channel document: missing non-empty \"kraus\" array");

  const bool has_gen = doc.contains("generator");
  const bool has_dot = doc.contains("kraus_dot");
  if (has_gen == has_dot)
    throw Error::parse(
        "channel document: exactly one of \"generator\" or \"kraus_dot\" is required");

  std::vector<CMat> kraus;
  for (std::size_t i = 0; i < doc["kraus"].size(); ++i) {
    CMat k = mat_from_json(doc["kraus"][i], "kraus[" + std::to_string(i) + "]");
    if (k.rows() != d_out || k.cols() != d_in)
      throw Error::parse("kraus[" + std::to_string(i) + "]: expected shape d_out x d_in");
    kraus.push_back(std::move(k));
  }

  if (has_gen) {
    const CMat gen = mat_from_json(doc["generator"], "generator");
    if (gen.rows() != d_in || gen.cols() != d_in)
      throw Error::parse("generator: expected shape d_in x d_in");
    return phase_encode(kraus, gen, phi0, tol);
  }

  if (!doc["kraus_dot"].is_array() || doc["kraus_dot"].size() != kraus.size())
    throw Error::parse("kraus_dot: expected an array matching \"kraus\" in length");
  Channel ch;
  ch.d_in = d_in;
  ch.d_out = d_out;
  ch.phi0 = phi0;
  ch.kraus = std::move(kraus);
  for (std::size_t i = 0; i < doc["kraus_dot"].size(); ++i) {
    CMat k = mat_from_json(doc["kraus_dot"][i], "kraus_dot[" + std::to_string(i) + "]");
    if (k.rows() != d_out || k.cols() != d_in)
      throw Error::parse("kraus_dot[" + std::to_string(i) + "]: expected shape d_out x d_in");
    ch.kraus_dot.push_back(std::move(k));
  }
  require_valid(ch, tol);
  return ch;
}

std::string channel_to_json(const Channel& ch, int indent) {
  json doc;
  doc["d_in"] = static_cast<long long>(ch.d_in);
  doc["d_out"] = static_cast<long long>(ch.d_out);
  doc["phi0"] = ch.phi0;
  doc["kraus"] = json::array();
  doc["kraus_dot"] = json::array();
  for (const CMat& k : ch.kraus) doc["kraus"].push_back(mat_to_json(k));
  for (const CMat& k : ch.kraus_dot) doc["kraus_dot"].push_back(mat_to_json(k));
  return doc.dump(indent);
}

std::string to_json(const CSResult& r, int indent) {
  json doc;
  doc["eps_plus"] = r.eps_plus;
  doc["eps_minus"] = r.eps_minus;
  doc["bound_const"] = r.bound_const;
  doc["classification"] = to_string(r.classification);
  doc["applicable"] = r.applicable;
  doc["f_cl"] = r.f_cl;
  doc["residual_mu"] = r.residual_mu;
  return doc.dump(indent);
}

std::string to_json(const CEResult& r, int indent) {
  json doc;
  doc["feasible"] = r.feasible;
  doc["t_opt"] = r.t_opt;
  doc["alpha_norm"] = r.alpha_norm;
  doc["beta_norm"] = r.beta_norm;
  doc["bound_const"] = r.bound_const;
  doc["h_opt"] = r.h_opt ? mat_to_json(r.h_opt->mat) : json(nullptr);
  doc["solver"] = {{"status", r.solver.status},
                   {"iterations", r.solver.iterations},
                   {"gap", r.solver.gap},
                   {"dual_residual", r.solver.dual_residual},
                   {"nullspace_dim", r.solver.nullspace_dim}};
  return doc.dump(indent);
}

std::string to_json(const OracleResult& r, int indent) {
  json doc;
  doc["best_qfi"] = r.f;
  json re = json::array();
  json im = json::array();
  for (Index i = 0; i < r.input.size(); ++i) {
    re.push_back(r.input(i).real());
    im.push_back(r.input(i).imag());
  }
  doc["best_state"] = {{"re", re}, {"im", im}};
  doc["restarts"] = r.restarts;
  doc["best_restart"] = r.best_restart;
  doc["iterations"] = r.iterations;
  doc["converged"] = r.converged;
  return doc.dump(indent);
}

}  // namespace qmb
