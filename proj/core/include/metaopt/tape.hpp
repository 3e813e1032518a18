// SPDX-License-Identifier: Apache-2.0

#ifndef METAOPT_TAPE_HPP
#define METAOPT_TAPE_HPP

#include <vector>

#include "metaopt/matrix.hpp"

namespace metaopt {

class Tape;

// Typed handles into the tape. Real nodes hold RealMatrix values; complex
// nodes hold ComplexMatrix values. A real scalar loss is a 1x1 real node.
struct RealVar {
    int idx = -1;
};
struct ComplexVar {
    int idx = -1;
};

// Define-by-run reverse-mode differentiation of a real scalar loss with
// respect to real parameter slots. Complex quantities are carried natively
// but their gradients are always with respect to the (real, imaginary) real
// pair: for a complex node Z the stored adjoint is dL/dRe(Z) + j dL/dIm(Z).
//
// Single-threaded per optimization run; a tape is never shared across threads.
class Tape {
public:
    Tape() = default;

    // Parameter slots (matrix-shaped; gradients come back flattened column-major).
    RealVar param(const RealMatrix& value);

    RealVar constant(const RealMatrix& value);
    RealVar scalar(double value);
    ComplexVar constant(const ComplexMatrix& value);

    // Real-valued operations (elementwise unless noted).
    RealVar add(RealVar a, RealVar b);
    RealVar sub(RealVar a, RealVar b);
    RealVar neg(RealVar a);
    RealVar mul(RealVar a, RealVar b);
    RealVar div(RealVar a, RealVar b);
    RealVar matmul(RealVar a, RealVar b);
    RealVar scale(RealVar a, double s);
    RealVar add_scalar(RealVar a, double s);
    RealVar sum(RealVar a);        // 1x1
    RealVar min_coeff(RealVar a);  // 1x1; subgradient routed to first argmin
    RealVar log1p(RealVar a);
    RealVar sigmoid(RealVar a);
    RealVar tanh(RealVar a);
    RealVar cos(RealVar a);
    RealVar sin(RealVar a);
    RealVar sqrt(RealVar a);
    RealVar square(RealVar a);
    RealVar segment(RealVar a, Eigen::Index offset, Eigen::Index len); // vector slice
    RealVar element(RealVar a, Eigen::Index i); // 1x1 from vector
    RealVar cwise_mul(RealVar a, const RealMatrix& mask);
    RealVar abs2(ComplexVar a);     // elementwise |z|^2
    RealVar sum_abs2(ComplexVar a); // 1x1

    // Complex-valued operations.
    ComplexVar complex_from_pair(RealVar re, RealVar im, Eigen::Index rows,
                                 Eigen::Index cols);
    ComplexVar cadd(ComplexVar a, ComplexVar b);
    ComplexVar csub(ComplexVar a, const ComplexMatrix& c);
    ComplexVar cmatmul(ComplexVar a, ComplexVar b);
    ComplexVar cmatmul(const ComplexMatrix& a, ComplexVar b); // constant lhs
    ComplexVar adjoint(ComplexVar a);
    ComplexVar scale_by(ComplexVar a, RealVar s); // s is a 1x1 real node
    ComplexVar diag(ComplexVar v);                // Bx1 -> BxB
    // Symmetric matrix from packed upper-triangle parameters (column-major
    // order over i <= j), re and im each of length B(B+1)/2.
    ComplexVar sym_from_upper_tri(RealVar re, RealVar im, Eigen::Index b);

    double value(RealVar a) const;             // 1x1 nodes
    const RealMatrix& rvalue(RealVar a) const;
    const ComplexMatrix& cvalue(ComplexVar a) const;

    // Reverse sweep from a scalar loss; may be called once per recording.
    void backward(RealVar loss);

    // Flattened gradient of the loss w.r.t. a parameter slot. If the slot has
    // no path to the loss the gradient is zero and *connected is set false.
    RealVector grad(RealVar p, bool* connected = nullptr) const;

    std::size_t size() const { return nodes_.size(); }
    void clear();

private:
    enum class Op : std::uint8_t {
        RConst, RParam, RAdd, RSub, RNeg, RMul, RDiv, RMatMul, RScale,
        RAddScalar, RSum, RMinCoeff, RLog1p, RSigmoid, RTanh, RCos, RSin,
        RSqrt, RSquare, RSegment, RCwiseMul, RAbs2, RSumAbs2,
        CConst, CFromPair, CAdd, CSubConst, CMatMul, CAdjoint, CScaleBy,
        CDiag, CSymFromTri,
    };

    struct Node {
        Op op;
        int a = -1;
        int b = -1;
        Eigen::Index aux0 = 0; // segment offset / argmin / rows
        Eigen::Index aux1 = 0; // segment length / cols
        double s = 0.0;        // scalar operand
        bool complex_kind = false;
        bool reached = false;
        RealMatrix rv, radj, mask;
        ComplexMatrix cv, cadj, cconst;
    };

    int push(Node&& n);
    const Node& at(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    Node& at(int i) { return nodes_[static_cast<std::size_t>(i)]; }

    std::vector<Node> nodes_;
    bool swept_ = false;
};

} // namespace metaopt

#endif
