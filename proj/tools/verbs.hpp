#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "report.hpp"

namespace formbound::cli {

struct ConstantsArgs {
  std::string table = "appendix";
  std::vector<std::string> n;
  std::vector<double> p;
  std::vector<int> k;
  double r = 1.0;
};

struct VerifyArgs {
  std::string suite;
  int n = 0;  // 0 picks the suite's default
  int k = 0;  // 0 cycles through every admissible degree where that makes sense
  std::vector<double> p;
  double q = 2.0;
  double r = 1.0;
  int count = 0;
  int max_degree = 3;
  std::vector<double> C;
  int points = 10000;
  int grid = 16;
  int decay_index = 25;
  double decay_ratio = 0.1;
  double residual_tol = 0.05;
};

struct TransferCheckArgs {
  std::string map_path;
  std::string form_path;
  double p = 2.0;
  double radius = 1.0;
  int points = 10000;
};

struct IlArgs {
  int n = 2;
  int k = 1;
  double p = 2.0;
  double q = 2.0;
  int grid = 16;
  bool allow_inadmissible = false;
};

struct PharmonicArgs {
  std::string form_path;
  double p = 2.0;
  int max_degree = 3;
  double tol = 1e-6;
  int max_iterations = 10000;
  double radius = 1.0;
  bool force_iterative = false;
};

// Each verb writes its primary output to out and returns the checks it ran.
Report cmd_constants(const ConstantsArgs& a, Format format, std::ostream& out);
Report cmd_verify(const VerifyArgs& a, const QuadratureConfig& cfg, Format format, std::ostream& out);
Report cmd_transfer_check(const TransferCheckArgs& a, const QuadratureConfig& cfg, Format format,
                          std::ostream& out);
Report cmd_il_compactness(const IlArgs& a, const QuadratureConfig& cfg, Format format, std::ostream& out);
Report cmd_pharmonic(const PharmonicArgs& a, const QuadratureConfig& cfg, std::ostream& out);

}  // namespace formbound::cli
