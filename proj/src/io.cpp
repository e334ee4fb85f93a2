#include "hftg/io.hpp"

#include "hftg/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hftg::io {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_xy_csv(const std::filesystem::path& path, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& values) {
  if (x.size() != values.size()) throw DomainError("write_xy_csv: column lengths differ");
  auto out = open_for_write(path);
  out << "x,value\n";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out << format_double(x[i]) << ',' << format_double(values[i]) << '\n';
  }
}

XYColumns read_xy_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,value", 0) != 0) {
    throw std::runtime_error(path.string() + ": expected header 'x,value'");
  }
  std::vector<double> xs, vs;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": missing comma");
    }
    try {
      xs.push_back(std::stod(line.substr(0, comma)));
      vs.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::logic_error&) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": bad number");
    }
  }
  XYColumns cols;
  cols.x = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  cols.values = Eigen::Map<Eigen::VectorXd>(vs.data(), static_cast<Eigen::Index>(vs.size()));
  return cols;
}

void write_summary_csv(const std::filesystem::path& path, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& mean, const Eigen::VectorXd& std_dev) {
  if (x.size() != mean.size() || x.size() != std_dev.size()) {
    throw DomainError("write_summary_csv: column lengths differ");
  }
  auto out = open_for_write(path);
  out << "x,mean,std\n";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out << format_double(x[i]) << ',' << format_double(mean[i]) << ',' << format_double(std_dev[i])
        << '\n';
  }
}

void write_chain_csv(const std::filesystem::path& path, const std::vector<Eigen::VectorXd>& samples) {
  auto out = open_for_write(path);
  if (samples.empty()) return;
  const Eigen::Index n = samples.front().size();
  for (Eigen::Index j = 0; j < n; ++j) out << (j ? "," : "") << "u_" << j;
  out << '\n';
  for (const auto& s : samples) {
    for (Eigen::Index j = 0; j < n; ++j) out << (j ? "," : "") << format_double(s[j]);
    out << '\n';
  }
}

}  // namespace hftg::io
