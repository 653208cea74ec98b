#pragma once

#include "garima/basis.hpp"
#include "garima/linalg.hpp"
#include "garima/series.hpp"
#include "garima/types.hpp"

#include <cstddef>

namespace garima {

/// How the moving-average part is estimated.
///
/// TwoStage projects the stage-one residuals on a basis of their own lags
/// (Gram system M alpha = b). Joint re-fits the AR basis together with q raw
/// lagged residuals in one least-squares problem.
enum class MaMode { TwoStage, Joint };

const char* to_string(MaMode mode) noexcept;

struct GalerkinSpec {
    ModelOrder order;
    BasisSpec ar_basis;  ///< input_dim = p
    BasisSpec ma_basis;  ///< input_dim = q
    MaMode ma_mode = MaMode::TwoStage;

    /// PolySquares on both stages.
    static GalerkinSpec poly(ModelOrder order, MaMode mode = MaMode::TwoStage);
    /// Same family on both stages, taken from `family_template` (degree/knots for B-splines).
    static GalerkinSpec with_basis(ModelOrder order, const BasisSpec& family_template,
                                   MaMode mode = MaMode::TwoStage);

    void validate() const;
};

/// Result of the AR projection on one window.
struct ArStage {
    Vector beta;
    BasisSpec basis;         ///< calibrated AR basis
    Vector residuals;        ///< eps0_t for t = offset .. N-1 of the differenced window
    std::size_t offset = 0;  ///< = p
    RankFlag rank = RankFlag::FullRank;
    double orthogonality = 0;  ///< relative ||Phi^T (Y - Phi beta)||_inf
    double sse = 0;
    std::size_t rows = 0;
};

/// Result of the residual-basis projection.
struct MaStage {
    Vector alpha;
    BasisSpec basis;  ///< calibrated MA basis
    RankFlag rank = RankFlag::FullRank;
    double orthogonality = 0;  ///< relative ||M alpha - b||_inf
    double sse = 0;
    std::size_t rows = 0;
};

/// Result of the combined [Phi | lagged residuals] regression.
struct JointStage {
    Vector beta;
    Vector theta;
    RankFlag rank = RankFlag::FullRank;
    double orthogonality = 0;
    double sse = 0;
    std::size_t rows = 0;
};

struct GalerkinDiagnostics {
    RankFlag ar_rank = RankFlag::FullRank;
    RankFlag ma_rank = RankFlag::FullRank;
    double ar_orthogonality = 0;
    double ma_orthogonality = 0;
    std::size_t ar_rows = 0;
    std::size_t ma_rows = 0;
    std::size_t window_length = 0;  ///< observations in the (undifferenced) fit window
};

struct GalerkinFit {
    GalerkinSpec spec;      ///< with calibrated bases
    Vector beta;            ///< AR coefficients used for forecasting
    Vector stage1_beta;     ///< AR coefficients that define eps0 (equal to beta in TwoStage)
    Vector alpha;           ///< TwoStage MA coefficients (length L, empty if q = 0)
    Vector theta;           ///< Joint MA coefficients (length q)
    Vector stage1_residuals;
    std::size_t residual_offset = 0;  ///< index of stage1_residuals(0) in the differenced window
    double sigma2_hat = 0;
    GalerkinDiagnostics diagnostics;
};

/// Stage one: OLS of y^(d)_t on Phi(x_t) over t = p .. N-1.
ArStage fit_ar_stage(const TimeSeries& window, const GalerkinSpec& spec);

/// Stage two: Galerkin projection of the stage-one residual sequence on the
/// basis of its own q lags, using every row with a full residual history.
MaStage fit_ma_stage_two_stage(const Vector& stage1_residuals, const GalerkinSpec& spec);

/// Combined regression on [Phi(x_t) | eps0_{t-1} .. eps0_{t-q}].
JointStage fit_joint(const TimeSeries& window, const GalerkinSpec& spec);

/// Full fit in the mode selected by spec.ma_mode.
GalerkinFit fit_galerkin(const TimeSeries& window, const GalerkinSpec& spec);

/// One-step-ahead forecast of the value following `history`, on the original scale.
double forecast_one_step(const GalerkinFit& fit, const TimeSeries& history);

}  // namespace garima
