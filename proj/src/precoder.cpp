#include "sprec/precoder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sprec {

namespace {

double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    const double px = kPi * x;
    return std::sin(px) / px;
}

void normalize_rows(ConstraintMatrix& c) {
    c.row_scales.assign(c.entries.rows(), 1.0);
    for (Eigen::Index r = 0; r < c.entries.rows(); ++r) {
        const double n = c.entries.row(r).norm();
        if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("constraint row is zero or not finite");
        c.entries.row(r) /= n;
        c.row_scales[r] = 1.0 / n;
    }
}

}  // namespace

cd subcarrier_spectrum(const Numerology& num, int k, double f) {
    const double t_useful = num.useful_duration();
    const double t_cp = num.cp_duration();
    const double t_sym = t_useful + t_cp;
    const double x = k * num.subcarrier_spacing - f;
    return t_sym * sinc(t_sym * x) * std::polar(1.0, kPi * x * (t_useful - t_cp));
}

CVector spectrum_kernel(const Numerology& num, const SubcarrierAllocation& alloc, double f) {
    CVector a(alloc.size());
    for (int i = 0; i < alloc.size(); ++i) a[i] = subcarrier_spectrum(num, alloc.indices[i], f);
    return a;
}

ConstraintMatrix continuity_constraints(const Numerology& num, const SubcarrierAllocation& alloc, int order) {
    const int k_active = alloc.size();
    if (k_active == 0) throw std::invalid_argument("continuity constraints: empty allocation");
    if (order < 0) throw std::invalid_argument("continuity constraints: negative order");
    if (2 * (order + 1) >= k_active)
        throw std::invalid_argument("continuity constraints: 2(N+1) must be smaller than K");

    ConstraintMatrix c;
    c.entries.resize(2 * (order + 1), k_active);
    const double half = num.subcarrier_count / 2.0;
    for (int i = 0; i < k_active; ++i) {
        const int k = alloc.indices[i];
        const double kn = k / half;
        const cd start_phase = std::polar(1.0, -2.0 * kPi * k * num.cp_samples / num.fft_size);
        double power = 1.0;
        for (int n = 0; n <= order; ++n) {
            c.entries(2 * n, i) = power * start_phase;
            c.entries(2 * n + 1, i) = power;
            power *= kn;
        }
    }
    normalize_rows(c);
    c.kind = "continuity(N=" + std::to_string(order) + ")";
    return c;
}

ConstraintMatrix notch_constraints(const Numerology& num, const SubcarrierAllocation& alloc,
                                   std::span<const double> notch_freqs) {
    if (notch_freqs.empty()) throw std::invalid_argument("notch constraints: no frequencies");
    if (static_cast<int>(notch_freqs.size()) >= alloc.size())
        throw std::invalid_argument("notch constraints: as many notches as subcarriers");

    ConstraintMatrix c;
    std::vector<double> kept;
    for (double f : notch_freqs) {
        if (!std::isfinite(f)) throw std::invalid_argument("notch constraints: non-finite frequency");
        if (std::find(kept.begin(), kept.end(), f) != kept.end()) {
            std::ostringstream os;
            os << "duplicate notch frequency " << f << " Hz dropped";
            c.warnings.push_back(os.str());
            continue;
        }
        kept.push_back(f);
    }
    c.entries.resize(static_cast<Eigen::Index>(kept.size()), alloc.size());
    for (std::size_t m = 0; m < kept.size(); ++m)
        c.entries.row(static_cast<Eigen::Index>(m)) = spectrum_kernel(num, alloc, kept[m]).transpose();
    normalize_rows(c);
    std::ostringstream os;
    os << "notch(";
    for (std::size_t m = 0; m < kept.size(); ++m) os << (m ? "," : "") << kept[m];
    os << ")";
    c.kind = os.str();
    return c;
}

ConstraintMatrix stack(std::span<const ConstraintMatrix> parts) {
    if (parts.empty()) throw std::invalid_argument("stack: no parts");
    if (parts.size() == 1) return parts.front();
    const int k = parts.front().cols();
    int rows = 0;
    for (const auto& p : parts) {
        if (p.cols() != k) throw std::invalid_argument("stack: mismatched subcarrier count");
        rows += p.rows();
    }
    ConstraintMatrix out;
    out.entries.resize(rows, k);
    out.kind = "stacked[";
    int r = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& p = parts[i];
        out.entries.middleRows(r, p.rows()) = p.entries;
        r += p.rows();
        out.row_scales.insert(out.row_scales.end(), p.row_scales.begin(), p.row_scales.end());
        out.warnings.insert(out.warnings.end(), p.warnings.begin(), p.warnings.end());
        out.kind += (i ? "+" : "") + p.kind;
    }
    out.kind += "]";
    return out;
}

Projector Projector::identity(int dimension) {
    if (dimension <= 0) throw std::invalid_argument("projector: non-positive dimension");
    Projector p;
    p.dimension_ = dimension;
    p.constraint_.resize(0, dimension);
    p.transfer_.resize(dimension, 0);
    p.kind_ = "identity";
    return p;
}

double Projector::condition_number() const {
    if (singular_values_.size() == 0) return 1.0;
    return singular_values_[0] / singular_values_[constraints() - 1];
}

CMatrix Projector::apply_columns(const CMatrix& x) const {
    if (x.rows() != dimension_) throw std::invalid_argument("projector: length mismatch");
    if (constraints() == 0) return x;
    return x - transfer_ * (constraint_ * x);
}

CMatrix Projector::dense() const {
    if (dimension_ > kDenseLimit) throw std::length_error("projector: dense form limited to K <= 4096");
    CMatrix g = CMatrix::Identity(dimension_, dimension_);
    if (constraints() > 0) g -= transfer_ * constraint_;
    return g;
}

Projector build_projector(const ConstraintMatrix& a) {
    const Eigen::Index m = a.entries.rows();
    const Eigen::Index k = a.entries.cols();
    if (m == 0 || k == 0) throw std::invalid_argument("projector: empty constraint matrix");
    if (m >= k) throw std::invalid_argument("projector: need fewer constraints than subcarriers");
    if (!a.entries.allFinite()) throw std::invalid_argument("projector: non-finite constraint entries");

    Projector p;
    p.dimension_ = static_cast<int>(k);
    p.requested_ = static_cast<int>(m);
    p.kind_ = a.kind;
    p.warnings_ = a.warnings;

    const RVector sv = Eigen::BDCSVD<CMatrix>(a.entries).singularValues();
    const double cutoff = kRankTolerance * sv[0];
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > cutoff) ++rank;
    if (rank == 0) throw std::invalid_argument("projector: constraint matrix has rank 0");

    CMatrix rows = a.entries;
    if (rank < m) {
        // Column-pivoted QR of A^H orders rows by independence; keep the
        // first `rank` pivots in their original order.
        Eigen::ColPivHouseholderQR<CMatrix> qr(a.entries.adjoint());
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < rank; ++i) keep.push_back(qr.colsPermutation().indices()[i]);
        std::sort(keep.begin(), keep.end());
        rows.resize(rank, k);
        for (Eigen::Index i = 0; i < rank; ++i) rows.row(i) = a.entries.row(keep[i]);
        std::ostringstream os;
        os << "rank deficient constraints: " << (m - rank) << " dependent row(s) dropped, M reduced from " << m
           << " to " << rank;
        p.warnings_.push_back(os.str());
    }

    // A^H = Q R  =>  A A^H = R^H R  and  T = A^H (A A^H)^-1 = Q R^-H.
    Eigen::HouseholderQR<CMatrix> qr(rows.adjoint());
    const CMatrix q = qr.householderQ() * CMatrix::Identity(k, rank);
    const CMatrix r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
    // T^H = R^-1 Q^H
    const CMatrix t_adj = r.triangularView<Eigen::Upper>().solve(q.adjoint());
    p.constraint_ = std::move(rows);
    p.transfer_ = t_adj.adjoint();
    p.singular_values_ = sv.head(rank);
    return p;
}

CVector precode(const Projector& p, const CVector& d, OpCount* count) { return p.apply(d, count); }

DistortionReport distortion(const Projector& p, const CMatrix& batch) {
    if (batch.cols() == 0) throw std::invalid_argument("distortion: empty batch");
    if (batch.rows() != p.dimension()) throw std::invalid_argument("distortion: length mismatch");
    DistortionReport rep;
    double eps_energy = 0.0;
    double data_energy = 0.0;
    for (Eigen::Index c = 0; c < batch.cols(); ++c) {
        const CVector eps = -p.complement(batch.col(c));
        const double e = eps.norm();
        rep.epsilon_norms.push_back(e);
        eps_energy += e * e;
        data_energy += batch.col(c).squaredNorm();
    }
    rep.evm_rms = data_energy > 0.0 ? std::sqrt(eps_energy / data_energy) : 0.0;
    return rep;
}

double rate_loss(const Projector& p) { return static_cast<double>(p.constraints()) / p.dimension(); }

std::string to_string(PrecoderConfig::Kind k) {
    switch (k) {
        case PrecoderConfig::Kind::none: return "none";
        case PrecoderConfig::Kind::continuity: return "continuity";
        case PrecoderConfig::Kind::notch: return "notch";
        case PrecoderConfig::Kind::stacked: return "stacked";
    }
    return "?";
}

PrecoderConfig::Kind parse_precoder_kind(std::string_view s) {
    if (s == "none") return PrecoderConfig::Kind::none;
    if (s == "continuity") return PrecoderConfig::Kind::continuity;
    if (s == "notch") return PrecoderConfig::Kind::notch;
    if (s == "stacked") return PrecoderConfig::Kind::stacked;
    throw std::invalid_argument("unknown precoder kind '" + std::string(s) + "'");
}

Projector make_precoder(const PrecoderConfig& cfg, const Numerology& num, const SubcarrierAllocation& alloc) {
    switch (cfg.kind) {
        case PrecoderConfig::Kind::none: return Projector::identity(alloc.size());
        case PrecoderConfig::Kind::continuity: return build_projector(continuity_constraints(num, alloc, cfg.order));
        case PrecoderConfig::Kind::notch: return build_projector(notch_constraints(num, alloc, cfg.notches));
        case PrecoderConfig::Kind::stacked: {
            const ConstraintMatrix parts[] = {continuity_constraints(num, alloc, cfg.order),
                                              notch_constraints(num, alloc, cfg.notches)};
            return build_projector(stack(parts));
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace sprec
