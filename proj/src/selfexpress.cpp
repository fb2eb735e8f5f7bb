#include "mlg/selfexpress.hpp"

#include <Eigen/Cholesky>
#include <map>
#include <mutex>

#include "mlg/kernels.hpp"

namespace mlg {

namespace {

std::map<std::string, SolverFn>& solver_registry() {
    static std::map<std::string, SolverFn> registry;
    return registry;
}

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

// min ||X - XC||_F^2 + lambda ||C||_F^2 s.t. diag(C) = 0. With
// Z = (X^T X + lambda I)^-1 the minimizer is C(i,j) = -Z(i,j)/Z(j,j), i != j.
Matrix least_squares_reference(const FeatureMatrix& x, const SolverParams& params) {
    const Eigen::Index n = x.values.cols();
    Matrix gram = x.values.transpose() * x.values;
    gram.diagonal().array() += params.lambda;
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("Cholesky factorization failed in the reference solver (layer " +
                             std::to_string(x.layer_index) + ")");
    }
    const Matrix z = llt.solve(Matrix::Identity(n, n));
    Matrix c(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double zjj = z(j, j);
        for (Eigen::Index i = 0; i < n; ++i) {
            c(i, j) = (i == j) ? 0.0 : -z(i, j) / zjj;
        }
    }
    return c;
}

}  // namespace

void register_solver(const std::string& name, SolverFn fn) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    solver_registry()[name] = std::move(fn);
}

bool solver_registered(const std::string& name) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    return solver_registry().count(name) > 0;
}

RepresentationMatrix solve_self_expressive(const FeatureMatrix& x, const SolverParams& params) {
    if (x.values.cols() < 2) {
        throw SizeError("self-expressive solve needs at least 2 samples, got " +
                        std::to_string(x.values.cols()));
    }
    if (!x.values.allFinite()) {
        throw NonFiniteError("non-finite feature matrix (layer " + std::to_string(x.layer_index) + ")");
    }

    Matrix c;
    if (params.id == SolverParams::Id::least_squares_reference) {
        if (!(params.lambda > 0.0)) throw ParamError("reference solver requires lambda > 0");
        c = least_squares_reference(x, params);
    } else {
        const auto it = params.extra.find("name");
        if (it == params.extra.end()) throw ConfigError("external solver needs extra key 'name'");
        SolverFn fn;
        {
            std::lock_guard<std::mutex> lock(registry_mutex());
            const auto entry = solver_registry().find(it->second);
            if (entry == solver_registry().end()) {
                throw ConfigError("no solver registered under '" + it->second + "'");
            }
            fn = entry->second;
        }
        c = fn(x, params);
        if (c.rows() != x.values.cols() || c.cols() != x.values.cols()) {
            throw SizeError("solver '" + it->second + "' returned a " + std::to_string(c.rows()) +
                            "x" + std::to_string(c.cols()) + " matrix, expected " +
                            std::to_string(x.values.cols()) + " square");
        }
    }

    c.diagonal().setZero();  // the only contract downstream stages rely on
    if (!c.allFinite()) {
        throw NumericalError("solver produced non-finite coefficients (layer " +
                             std::to_string(x.layer_index) + ")");
    }
    return RepresentationMatrix{std::move(c), x.layer_index};
}

RepresentationMatrix truncate_ipd(const RepresentationMatrix& c, int d) {
    const int n = c.size();
    if (d < 1 || d > n - 1) {
        throw ParamError("truncation width d = " + std::to_string(d) + " outside [1, " +
                         std::to_string(n - 1) + "]");
    }
    return RepresentationMatrix{kernels::truncate_columns(c.values, d), c.source_layer};
}

Matrix symmetrize(const Matrix& c) {
    if (!c.allFinite()) throw NonFiniteError("cannot symmetrize a non-finite matrix");
    return kernels::symmetrize_abs(c);
}

Matrix symmetrize(const RepresentationMatrix& c) { return symmetrize(c.values); }

}  // namespace mlg
