#include "gsk/kernel_json.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace gsk {

namespace {

using nlohmann::json;

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& a, const char* what) {
  if (!a.is_array() || a.empty())
    throw std::invalid_argument(std::string(what) + " must be a non-empty array");
  Vec v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number())
      throw std::invalid_argument(std::string(what) + " entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  return v;
}

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw std::invalid_argument(std::string("kernel config: missing numeric '") +
                                key + "'");
  return j[key].get<double>();
}

std::string require_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw std::invalid_argument(std::string("kernel config: missing string '") +
                                key + "'");
  return j[key].get<std::string>();
}

}  // namespace

nlohmann::json kernel_to_json(const AnyKernel& kernel, double noise_variance) {
  json j;
  j["schema_version"] = 1;
  j["noise_variance"] = noise_variance;
  if (const auto* s = std::get_if<StationaryGSK>(&kernel)) {
    j["type"] = "stationary";
    j["base"] = to_string(s->base().kind);
    json comps = json::array();
    for (const auto& c : s->components()) {
      comps.push_back({{"sigma2", c.sigma2},
                       {"gamma", vec_to_json(c.gamma)},
                       {"omega", vec_to_json(c.omega)}});
    }
    j["components"] = std::move(comps);
  } else if (const auto* n = std::get_if<NonstationaryGSK>(&kernel)) {
    j["type"] = "nonstationary";
    j["base"] = to_string(n->star().base.kind);
    j["star"] = to_string(n->star().variant);
    json comps = json::array();
    for (const auto& c : n->components()) {
      comps.push_back({{"sigma2", c.sigma2},
                       {"gamma", vec_to_json(c.gamma)},
                       {"omega1", vec_to_json(c.omega1)},
                       {"omega2", vec_to_json(c.omega2)}});
    }
    j["components"] = std::move(comps);
  } else {
    // Sparse spectrum: persist the equivalent gamma = 0 stationary form.
    const auto& ss = std::get<SparseSpectrumKernel>(kernel);
    return kernel_to_json(AnyKernel{ss.as_stationary()}, noise_variance);
  }
  return j;
}

KernelConfig kernel_from_json(const nlohmann::json& j) {
  const std::string type = require_string(j, "type");
  const double noise = require_number(j, "noise_variance");
  if (noise < 0.0)
    throw std::invalid_argument("kernel config: noise_variance must be >= 0");
  const BaseKind base = base_kind_from_string(require_string(j, "base"));
  if (!j.contains("components") || !j["components"].is_array() ||
      j["components"].empty())
    throw std::invalid_argument("kernel config: 'components' must be a non-empty array");

  if (type == "stationary") {
    std::vector<StationaryComponent> comps;
    for (const auto& cj : j["components"]) {
      StationaryComponent c;
      c.sigma2 = require_number(cj, "sigma2");
      c.gamma = vec_from_json(cj.value("gamma", json::array()), "gamma");
      c.omega = vec_from_json(cj.value("omega", json::array()), "omega");
      comps.push_back(std::move(c));
    }
    return {AnyKernel{StationaryGSK(BaseKernel{base}, std::move(comps))}, noise};
  }
  if (type == "nonstationary") {
    const StarVariant star = star_variant_from_string(require_string(j, "star"));
    std::vector<NonstationaryComponent> comps;
    for (const auto& cj : j["components"]) {
      NonstationaryComponent c;
      c.sigma2 = require_number(cj, "sigma2");
      c.gamma = vec_from_json(cj.value("gamma", json::array()), "gamma");
      c.omega1 = vec_from_json(cj.value("omega1", json::array()), "omega1");
      c.omega2 = vec_from_json(cj.value("omega2", json::array()), "omega2");
      comps.push_back(std::move(c));
    }
    return {AnyKernel{NonstationaryGSK(StarKernel{star, BaseKernel{base}},
                                       std::move(comps))},
            noise};
  }
  throw std::invalid_argument("kernel config: type must be stationary|nonstationary");
}

KernelConfig load_kernel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open kernel file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("kernel file " + path + ": " + e.what());
  }
  return kernel_from_json(j);
}

void save_kernel_file(const std::string& path, const AnyKernel& kernel,
                      double noise_variance) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write kernel file: " + path);
  out << kernel_to_json(kernel, noise_variance).dump(2) << "\n";
}

}  // namespace gsk
