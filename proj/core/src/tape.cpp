// SPDX-License-Identifier: Apache-2.0

#include "metaopt/tape.hpp"

#include <cmath>

namespace metaopt {

namespace {

void check_same_shape(const RealMatrix& a, const RealMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatchError(std::string(op) + ": shape mismatch");
}

} // namespace

int Tape::push(Node&& n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

RealVar Tape::param(const RealMatrix& value) {
    require_finite(value, "Tape::param");
    Node n;
    n.op = Op::RParam;
    n.rv = value;
    return {push(std::move(n))};
}

RealVar Tape::constant(const RealMatrix& value) {
    Node n;
    n.op = Op::RConst;
    n.rv = value;
    return {push(std::move(n))};
}

RealVar Tape::scalar(double value) {
    return constant(RealMatrix{RealMatrix::Constant(1, 1, value)});
}

ComplexVar Tape::constant(const ComplexMatrix& value) {
    Node n;
    n.op = Op::CConst;
    n.complex_kind = true;
    n.cv = value;
    return {push(std::move(n))};
}

RealVar Tape::add(RealVar a, RealVar b) {
    check_same_shape(at(a.idx).rv, at(b.idx).rv, "add");
    Node n;
    n.op = Op::RAdd;
    n.a = a.idx;
    n.b = b.idx;
    n.rv = at(a.idx).rv + at(b.idx).rv;
    return {push(std::move(n))};
}

RealVar Tape::sub(RealVar a, RealVar b) {
    check_same_shape(at(a.idx).rv, at(b.idx).rv, "sub");
    Node n;
    n.op = Op::RSub;
    n.a = a.idx;
    n.b = b.idx;
    n.rv = at(a.idx).rv - at(b.idx).rv;
    return {push(std::move(n))};
}

RealVar Tape::neg(RealVar a) {
    Node n;
    n.op = Op::RNeg;
    n.a = a.idx;
    n.rv = -at(a.idx).rv;
    return {push(std::move(n))};
}

RealVar Tape::mul(RealVar a, RealVar b) {
    check_same_shape(at(a.idx).rv, at(b.idx).rv, "mul");
    Node n;
    n.op = Op::RMul;
    n.a = a.idx;
    n.b = b.idx;
    n.rv = at(a.idx).rv.cwiseProduct(at(b.idx).rv);
    return {push(std::move(n))};
}

RealVar Tape::div(RealVar a, RealVar b) {
    check_same_shape(at(a.idx).rv, at(b.idx).rv, "div");
    Node n;
    n.op = Op::RDiv;
    n.a = a.idx;
    n.b = b.idx;
    n.rv = at(a.idx).rv.cwiseQuotient(at(b.idx).rv);
    return {push(std::move(n))};
}

RealVar Tape::matmul(RealVar a, RealVar b) {
    if (at(a.idx).rv.cols() != at(b.idx).rv.rows())
        throw DimensionMismatchError("matmul: inner dimensions differ");
    Node n;
    n.op = Op::RMatMul;
    n.a = a.idx;
    n.b = b.idx;
    n.rv = at(a.idx).rv * at(b.idx).rv;
    return {push(std::move(n))};
}

RealVar Tape::scale(RealVar a, double s) {
    Node n;
    n.op = Op::RScale;
    n.a = a.idx;
    n.s = s;
    n.rv = s * at(a.idx).rv;
    return {push(std::move(n))};
}

RealVar Tape::add_scalar(RealVar a, double s) {
    Node n;
    n.op = Op::RAddScalar;
    n.a = a.idx;
    n.s = s;
    n.rv = at(a.idx).rv.array() + s;
    return {push(std::move(n))};
}

RealVar Tape::sum(RealVar a) {
    Node n;
    n.op = Op::RSum;
    n.a = a.idx;
    n.rv = RealMatrix::Constant(1, 1, at(a.idx).rv.sum());
    return {push(std::move(n))};
}

RealVar Tape::min_coeff(RealVar a) {
    const RealMatrix& v = at(a.idx).rv;
    if (v.size() == 0)
        throw DimensionMismatchError("min_coeff: empty input");
    // First index on exact ties: strict comparison scan.
    Eigen::Index arg = 0;
    double best = v.data()[0];
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        if (v.data()[i] < best) {
            best = v.data()[i];
            arg = i;
        }
    }
    Node n;
    n.op = Op::RMinCoeff;
    n.a = a.idx;
    n.aux0 = arg;
    n.rv = RealMatrix::Constant(1, 1, best);
    return {push(std::move(n))};
}

RealVar Tape::log1p(RealVar a) {
    Node n;
    n.op = Op::RLog1p;
    n.a = a.idx;
    n.rv = at(a.idx).rv.array().log1p();
    return {push(std::move(n))};
}

RealVar Tape::sigmoid(RealVar a) {
    Node n;
    n.op = Op::RSigmoid;
    n.a = a.idx;
    n.rv = (1.0 / (1.0 + (-at(a.idx).rv.array()).exp())).matrix();
    return {push(std::move(n))};
}

RealVar Tape::tanh(RealVar a) {
    Node n;
    n.op = Op::RTanh;
    n.a = a.idx;
    n.rv = at(a.idx).rv.array().tanh();
    return {push(std::move(n))};
}

RealVar Tape::cos(RealVar a) {
    Node n;
    n.op = Op::RCos;
    n.a = a.idx;
    n.rv = at(a.idx).rv.array().cos();
    return {push(std::move(n))};
}

RealVar Tape::sin(RealVar a) {
    Node n;
    n.op = Op::RSin;
    n.a = a.idx;
    n.rv = at(a.idx).rv.array().sin();
    return {push(std::move(n))};
}

RealVar Tape::sqrt(RealVar a) {
    Node n;
    n.op = Op::RSqrt;
    n.a = a.idx;
    n.rv = at(a.idx).rv.array().sqrt();
    return {push(std::move(n))};
}

RealVar Tape::square(RealVar a) {
    Node n;
    n.op = Op::RSquare;
    n.a = a.idx;
    n.rv = at(a.idx).rv.array().square();
    return {push(std::move(n))};
}

RealVar Tape::segment(RealVar a, Eigen::Index offset, Eigen::Index len) {
    const RealMatrix& v = at(a.idx).rv;
    if (v.cols() != 1 || offset < 0 || offset + len > v.rows())
        throw DimensionMismatchError("segment: bad range or non-vector input");
    Node n;
    n.op = Op::RSegment;
    n.a = a.idx;
    n.aux0 = offset;
    n.aux1 = len;
    n.rv = v.middleRows(offset, len);
    return {push(std::move(n))};
}

RealVar Tape::element(RealVar a, Eigen::Index i) { return segment(a, i, 1); }

RealVar Tape::cwise_mul(RealVar a, const RealMatrix& mask) {
    check_same_shape(at(a.idx).rv, mask, "cwise_mul");
    Node n;
    n.op = Op::RCwiseMul;
    n.a = a.idx;
    n.mask = mask;
    n.rv = at(a.idx).rv.cwiseProduct(mask);
    return {push(std::move(n))};
}

RealVar Tape::abs2(ComplexVar a) {
    Node n;
    n.op = Op::RAbs2;
    n.a = a.idx;
    n.rv = at(a.idx).cv.cwiseAbs2();
    return {push(std::move(n))};
}

RealVar Tape::sum_abs2(ComplexVar a) {
    Node n;
    n.op = Op::RSumAbs2;
    n.a = a.idx;
    n.rv = RealMatrix::Constant(1, 1, at(a.idx).cv.squaredNorm());
    return {push(std::move(n))};
}

ComplexVar Tape::complex_from_pair(RealVar re, RealVar im, Eigen::Index rows,
                                   Eigen::Index cols) {
    const RealMatrix& r = at(re.idx).rv;
    const RealMatrix& i = at(im.idx).rv;
    if (r.size() != rows * cols || i.size() != rows * cols)
        throw DimensionMismatchError("complex_from_pair: size mismatch");
    Node n;
    n.op = Op::CFromPair;
    n.complex_kind = true;
    n.a = re.idx;
    n.b = im.idx;
    n.aux0 = rows;
    n.aux1 = cols;
    n.cv.resize(rows, cols);
    for (Eigen::Index k = 0; k < rows * cols; ++k)
        n.cv.data()[k] = Complex(r.data()[k], i.data()[k]);
    return {push(std::move(n))};
}

ComplexVar Tape::cadd(ComplexVar a, ComplexVar b) {
    if (at(a.idx).cv.rows() != at(b.idx).cv.rows() ||
        at(a.idx).cv.cols() != at(b.idx).cv.cols())
        throw DimensionMismatchError("cadd: shape mismatch");
    Node n;
    n.op = Op::CAdd;
    n.complex_kind = true;
    n.a = a.idx;
    n.b = b.idx;
    n.cv = at(a.idx).cv + at(b.idx).cv;
    return {push(std::move(n))};
}

ComplexVar Tape::csub(ComplexVar a, const ComplexMatrix& c) {
    if (at(a.idx).cv.rows() != c.rows() || at(a.idx).cv.cols() != c.cols())
        throw DimensionMismatchError("csub: shape mismatch");
    Node n;
    n.op = Op::CSubConst;
    n.complex_kind = true;
    n.a = a.idx;
    n.cv = at(a.idx).cv - c;
    return {push(std::move(n))};
}

ComplexVar Tape::cmatmul(ComplexVar a, ComplexVar b) {
    if (at(a.idx).cv.cols() != at(b.idx).cv.rows())
        throw DimensionMismatchError("cmatmul: inner dimensions differ");
    Node n;
    n.op = Op::CMatMul;
    n.complex_kind = true;
    n.a = a.idx;
    n.b = b.idx;
    n.cv = at(a.idx).cv * at(b.idx).cv;
    return {push(std::move(n))};
}

ComplexVar Tape::cmatmul(const ComplexMatrix& a, ComplexVar b) {
    return cmatmul(constant(a), b);
}

ComplexVar Tape::adjoint(ComplexVar a) {
    Node n;
    n.op = Op::CAdjoint;
    n.complex_kind = true;
    n.a = a.idx;
    n.cv = at(a.idx).cv.adjoint();
    return {push(std::move(n))};
}

ComplexVar Tape::scale_by(ComplexVar a, RealVar s) {
    if (at(s.idx).rv.size() != 1)
        throw DimensionMismatchError("scale_by: scale factor must be scalar");
    Node n;
    n.op = Op::CScaleBy;
    n.complex_kind = true;
    n.a = a.idx;
    n.b = s.idx;
    n.cv = at(s.idx).rv(0, 0) * at(a.idx).cv;
    return {push(std::move(n))};
}

ComplexVar Tape::diag(ComplexVar v) {
    if (at(v.idx).cv.cols() != 1)
        throw DimensionMismatchError("diag: expected column vector");
    Node n;
    n.op = Op::CDiag;
    n.complex_kind = true;
    n.a = v.idx;
    const ComplexMatrix& vec = at(v.idx).cv;
    n.cv = ComplexMatrix::Zero(vec.rows(), vec.rows());
    n.cv.diagonal() = vec.col(0);
    return {push(std::move(n))};
}

ComplexVar Tape::sym_from_upper_tri(RealVar re, RealVar im, Eigen::Index b) {
    const Eigen::Index ntri = b * (b + 1) / 2;
    if (at(re.idx).rv.size() != ntri || at(im.idx).rv.size() != ntri)
        throw DimensionMismatchError("sym_from_upper_tri: wrong parameter length");
    Node n;
    n.op = Op::CSymFromTri;
    n.complex_kind = true;
    n.a = re.idx;
    n.b = im.idx;
    n.aux0 = b;
    n.cv.resize(b, b);
    Eigen::Index t = 0;
    for (Eigen::Index j = 0; j < b; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i, ++t) {
            const Complex z(at(re.idx).rv.data()[t], at(im.idx).rv.data()[t]);
            n.cv(i, j) = z;
            n.cv(j, i) = z;
        }
    }
    return {push(std::move(n))};
}

double Tape::value(RealVar a) const {
    if (at(a.idx).rv.size() != 1)
        throw DimensionMismatchError("Tape::value: node is not scalar");
    return at(a.idx).rv(0, 0);
}

const RealMatrix& Tape::rvalue(RealVar a) const { return at(a.idx).rv; }

const ComplexMatrix& Tape::cvalue(ComplexVar a) const { return at(a.idx).cv; }

void Tape::backward(RealVar loss) {
    if (swept_)
        throw std::logic_error("Tape::backward: already swept; clear() first");
    swept_ = true;
    Node& top = at(loss.idx);
    if (top.complex_kind || top.rv.size() != 1)
        throw DimensionMismatchError("backward: loss must be a real scalar");

    // Reachability: mark ancestors of the loss in one reverse pass.
    top.reached = true;
    for (int i = loss.idx; i >= 0; --i) {
        const Node& n = at(i);
        if (!n.reached)
            continue;
        if (n.a >= 0)
            at(n.a).reached = true;
        if (n.b >= 0)
            at(n.b).reached = true;
    }
    for (int i = 0; i <= loss.idx; ++i) {
        Node& n = at(i);
        if (!n.reached)
            continue;
        if (n.complex_kind)
            n.cadj = ComplexMatrix::Zero(n.cv.rows(), n.cv.cols());
        else
            n.radj = RealMatrix::Zero(n.rv.rows(), n.rv.cols());
    }
    top.radj(0, 0) = 1.0;

    for (int i = loss.idx; i >= 0; --i) {
        Node& n = at(i);
        if (!n.reached)
            continue;
        switch (n.op) {
        case Op::RConst:
        case Op::RParam:
        case Op::CConst:
            break;
        case Op::RAdd:
            at(n.a).radj += n.radj;
            at(n.b).radj += n.radj;
            break;
        case Op::RSub:
            at(n.a).radj += n.radj;
            at(n.b).radj -= n.radj;
            break;
        case Op::RNeg:
            at(n.a).radj -= n.radj;
            break;
        case Op::RMul:
            at(n.a).radj += n.radj.cwiseProduct(at(n.b).rv);
            at(n.b).radj += n.radj.cwiseProduct(at(n.a).rv);
            break;
        case Op::RDiv:
            at(n.a).radj += n.radj.cwiseQuotient(at(n.b).rv);
            at(n.b).radj -= n.radj.cwiseProduct(n.rv).cwiseQuotient(at(n.b).rv);
            break;
        case Op::RMatMul:
            at(n.a).radj.noalias() += n.radj * at(n.b).rv.transpose();
            at(n.b).radj.noalias() += at(n.a).rv.transpose() * n.radj;
            break;
        case Op::RScale:
            at(n.a).radj += n.s * n.radj;
            break;
        case Op::RAddScalar:
            at(n.a).radj += n.radj;
            break;
        case Op::RSum:
            at(n.a).radj.array() += n.radj(0, 0);
            break;
        case Op::RMinCoeff:
            at(n.a).radj.data()[n.aux0] += n.radj(0, 0);
            break;
        case Op::RLog1p:
            at(n.a).radj.array() +=
                n.radj.array() / (1.0 + at(n.a).rv.array());
            break;
        case Op::RSigmoid:
            at(n.a).radj.array() +=
                n.radj.array() * n.rv.array() * (1.0 - n.rv.array());
            break;
        case Op::RTanh:
            at(n.a).radj.array() +=
                n.radj.array() * (1.0 - n.rv.array().square());
            break;
        case Op::RCos:
            at(n.a).radj.array() -= n.radj.array() * at(n.a).rv.array().sin();
            break;
        case Op::RSin:
            at(n.a).radj.array() += n.radj.array() * at(n.a).rv.array().cos();
            break;
        case Op::RSqrt:
            at(n.a).radj.array() += n.radj.array() / (2.0 * n.rv.array());
            break;
        case Op::RSquare:
            at(n.a).radj.array() +=
                2.0 * n.radj.array() * at(n.a).rv.array();
            break;
        case Op::RSegment:
            at(n.a).radj.middleRows(n.aux0, n.aux1) += n.radj;
            break;
        case Op::RCwiseMul:
            at(n.a).radj += n.radj.cwiseProduct(n.mask);
            break;
        case Op::RAbs2:
            // |z|^2 smooth in (re, im): W_z += 2 * adj .* z (gradient 0 at z=0).
            at(n.a).cadj += 2.0 * n.radj.cwiseProduct(at(n.a).cv.real()) +
                            Complex(0, 2.0) *
                                n.radj.cwiseProduct(at(n.a).cv.imag());
            break;
        case Op::RSumAbs2:
            at(n.a).cadj += 2.0 * n.radj(0, 0) * at(n.a).cv;
            break;
        case Op::CFromPair: {
            Node& re = at(n.a);
            Node& im = at(n.b);
            for (Eigen::Index k = 0; k < n.cv.size(); ++k) {
                re.radj.data()[k] += n.cadj.data()[k].real();
                im.radj.data()[k] += n.cadj.data()[k].imag();
            }
            break;
        }
        case Op::CAdd:
            at(n.a).cadj += n.cadj;
            at(n.b).cadj += n.cadj;
            break;
        case Op::CSubConst:
            at(n.a).cadj += n.cadj;
            break;
        case Op::CMatMul:
            // W_A = W_C B^H, W_B = A^H W_C (real-pair adjoint convention).
            at(n.a).cadj.noalias() += n.cadj * at(n.b).cv.adjoint();
            at(n.b).cadj.noalias() += at(n.a).cv.adjoint() * n.cadj;
            break;
        case Op::CAdjoint:
            at(n.a).cadj += n.cadj.adjoint();
            break;
        case Op::CScaleBy:
            at(n.a).cadj += at(n.b).rv(0, 0) * n.cadj;
            at(n.b).radj(0, 0) +=
                (n.cadj.conjugate().cwiseProduct(at(n.a).cv)).sum().real();
            break;
        case Op::CDiag:
            at(n.a).cadj.col(0) += n.cadj.diagonal();
            break;
        case Op::CSymFromTri: {
            Node& re = at(n.a);
            Node& im = at(n.b);
            const Eigen::Index b = n.aux0;
            Eigen::Index t = 0;
            for (Eigen::Index j = 0; j < b; ++j) {
                for (Eigen::Index i = 0; i <= j; ++i, ++t) {
                    Complex w = n.cadj(i, j);
                    if (i != j)
                        w += n.cadj(j, i);
                    re.radj.data()[t] += w.real();
                    im.radj.data()[t] += w.imag();
                }
            }
            break;
        }
        }
    }
}

RealVector Tape::grad(RealVar p, bool* connected) const {
    const Node& n = at(p.idx);
    if (n.op != Op::RParam)
        throw std::logic_error("Tape::grad: node is not a parameter slot");
    if (!swept_)
        throw std::logic_error("Tape::grad: backward() not yet run");
    if (connected)
        *connected = n.reached;
    if (!n.reached)
        return RealVector::Zero(n.rv.size());
    RealVector g = Eigen::Map<const RealVector>(n.radj.data(), n.radj.size());
    if (!g.allFinite())
        throw NonFiniteError("Tape::grad: non-finite gradient");
    return g;
}

void Tape::clear() {
    nodes_.clear();
    swept_ = false;
}

} // namespace metaopt
