#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace blockpole {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Library errors carry a stage tag so front ends can map failures to
// exit codes: Input -> bad request/document (2), Numeric -> a numeric
// stage refused or failed (3).
class Error : public std::runtime_error {
public:
  enum class Kind { Input, Numeric };

  Error(Kind kind, std::string stage, const std::string& message)
      : std::runtime_error("[" + stage + "] " + message),
        kind_(kind),
        stage_(std::move(stage)) {}

  Kind kind() const { return kind_; }
  const std::string& stage() const { return stage_; }

private:
  Kind kind_;
  std::string stage_;
};

[[noreturn]] inline void throw_input(const std::string& stage, const std::string& msg) {
  throw Error(Error::Kind::Input, stage, msg);
}

[[noreturn]] inline void throw_numeric(const std::string& stage, const std::string& msg) {
  throw Error(Error::Kind::Numeric, stage, msg);
}

}  // namespace blockpole
