#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace wjet {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error categories; the CLI maps them onto process exit codes.
enum class errc : int {
    invalid_input = 2,
    duplicate_points = 3,
    cap_exceeded = 4,
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw error(code, msg); }

inline void require(bool cond, errc code, const std::string& msg) {
    if (!cond) fail(code, msg);
}

// Numeric policy shared across modules.
inline constexpr double ortho_tol = 1e-10;     // orthonormality target for subspace bases
inline constexpr double rank_rel_tol = 1e-9;   // sigma_j < rank_rel_tol * sigma_1 counts as zero
inline constexpr int default_dim_cap = 500;    // refuse jet spaces with more coefficients than this

inline constexpr const char* library_version = "1.0.0";

} // namespace wjet
