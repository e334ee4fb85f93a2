#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace hftg::io {

// 17 significant digits, enough for an exact double round trip.
std::string format_double(double v);

// Header "x,value", one row per entry.
void write_xy_csv(const std::filesystem::path& path, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& values);

struct XYColumns {
  Eigen::VectorXd x;
  Eigen::VectorXd values;
};

XYColumns read_xy_csv(const std::filesystem::path& path);

// Header "x,mean,std".
void write_summary_csv(const std::filesystem::path& path, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& mean, const Eigen::VectorXd& std_dev);

// One kept sample per row, header "u_0,...,u_N".
void write_chain_csv(const std::filesystem::path& path, const std::vector<Eigen::VectorXd>& samples);

}  // namespace hftg::io
