#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace garima {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorCode {
    InsufficientData,
    InsufficientHistory,
    BadSeedValues,
    BadInput,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable failure category.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// ARIMA(p, d, q) orders.
struct ModelOrder {
    int p = 0;
    int d = 0;
    int q = 0;

    /// Throws BadInput for negative orders or p = q = 0.
    void validate() const;

    friend bool operator==(const ModelOrder&, const ModelOrder&) = default;
};

}  // namespace garima
