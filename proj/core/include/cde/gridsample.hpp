#pragma once

#include <map>
#include <string>
#include <vector>

#include "cde/complex.hpp"

namespace cde {

/// Rectangular sample of a solution over a z- or w-domain, exportable to CSV
/// and JSON. points/values/residuals always have equal length; metadata
/// echoes the command and config so a run can be reproduced byte for byte.
struct GridSample {
  std::string domain_tag = "z-plane";  // or "w-plane"
  std::vector<Cplx> points;
  std::vector<Cplx> values;
  std::vector<Real> residuals;
  std::map<std::string, std::string> metadata;  // command, config echo, seed, version

  void push(const Cplx& point, const Cplx& value, const Real& residual);
  void validate() const;

  /// CSV: '#'-prefixed metadata prologue, then the header
  /// re_point,im_point,re_value,im_value,residual and one row per point
  /// (row-major: re ascending, then im).
  std::string to_csv() const;

  std::string to_json() const;
  static GridSample from_json(const std::string& text);
};

enum class ExportFormat { Csv, Json };

void export_grid(const GridSample& sample, ExportFormat format, const std::string& path);

}  // namespace cde
