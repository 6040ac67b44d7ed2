#include "cde/gridsample.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cde/errors.hpp"

namespace cde {

void GridSample::push(const Cplx& point, const Cplx& value, const Real& residual) {
  points.push_back(point);
  values.push_back(value);
  residuals.push_back(residual);
}

void GridSample::validate() const {
  if (points.size() != values.size() || points.size() != residuals.size())
    throw ValidationError("GridSample: points/values/residuals length mismatch");
}

std::string GridSample::to_csv() const {
  validate();
  std::ostringstream os;
  for (const auto& [k, v] : metadata) os << "# " << k << "," << v << "\n";
  os << "re_point,im_point,re_value,im_value,residual\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    os << to_string(points[i].re) << "," << to_string(points[i].im) << ","
       << to_string(values[i].re) << "," << to_string(values[i].im) << ","
       << to_string(residuals[i]) << "\n";
  }
  return os.str();
}

std::string GridSample::to_json() const {
  validate();
  nlohmann::json j;
  j["formatVersion"] = 1;
  j["domain"] = domain_tag;
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : metadata) meta[k] = v;
  j["metadata"] = std::move(meta);
  nlohmann::json pts = nlohmann::json::array();
  nlohmann::json vals = nlohmann::json::array();
  nlohmann::json res = nlohmann::json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    pts.push_back({to_string(points[i].re), to_string(points[i].im)});
    vals.push_back({to_string(values[i].re), to_string(values[i].im)});
    res.push_back(to_string(residuals[i]));
  }
  j["points"] = std::move(pts);
  j["values"] = std::move(vals);
  j["residuals"] = std::move(res);
  return j.dump(2);
}

GridSample GridSample::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  GridSample g;
  g.domain_tag = j.at("domain").get<std::string>();
  for (const auto& [k, v] : j.at("metadata").items()) g.metadata[k] = v.get<std::string>();
  const auto& pts = j.at("points");
  const auto& vals = j.at("values");
  const auto& res = j.at("residuals");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    g.points.emplace_back(parse_real(pts.at(i).at(0).get<std::string>()),
                          parse_real(pts.at(i).at(1).get<std::string>()));
    g.values.emplace_back(parse_real(vals.at(i).at(0).get<std::string>()),
                          parse_real(vals.at(i).at(1).get<std::string>()));
    g.residuals.push_back(parse_real(res.at(i).get<std::string>()));
  }
  g.validate();
  return g;
}

void export_grid(const GridSample& sample, ExportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("export_grid: cannot open '" + path + "' for writing");
  out << (format == ExportFormat::Csv ? sample.to_csv() : sample.to_json());
  if (!out) throw ValidationError("export_grid: write failed for '" + path + "'");
}

}  // namespace cde
