#pragma once

#include "kglab/field.hpp"
#include "kglab/grid.hpp"
#include "kglab/nonlinearity.hpp"

#include <optional>
#include <string>
#include <utility>

namespace kglab {

/// Closed-form initial-data profiles. All bump profiles are centered and must
/// fit strictly inside the torus; multi_bump tiles shifted copies of a base
/// bump along the first axis.
struct DataRecipe {
    enum class Profile { gaussian_bump, cosine_bump, fourier_mode, soliton_scaled, multi_bump };

    Profile profile = Profile::fourier_mode;
    double amplitude = 1.0;       // lambda
    double velocity_ratio = 0.0;  // sigma, u1 = sigma * u0

    // profile parameters
    double width = 1.0;       // gaussian_bump
    double radius = 1.0;      // cosine_bump
    long mode_k = 1;          // fourier_mode
    double soliton_p = 3.0;   // soliton_scaled exponent

    // multi_bump
    int count = 1;
    double separation = 0.0;  // center-to-center distance
    Profile base_profile = Profile::cosine_bump;

    /// Support radius of the (single-bump) profile; 0 for data without
    /// compact support (fourier_mode, soliton_scaled).
    double support_radius() const;

    /// Effective period of the realized data: L/count for uniform multi_bump
    /// tilings, the torus period otherwise. Filled in by realize().
    static DataRecipe fourier(long k, double amplitude, double sigma);
    static DataRecipe gaussian(double width, double amplitude, double sigma);
    static DataRecipe cosine(double radius, double amplitude, double sigma);
    static DataRecipe soliton(double p, double amplitude);
    static DataRecipe multi(const DataRecipe& base, int count, double separation);
};

struct RealizedData {
    Field u0;
    Field u1;
    double support_radius = 0.0;   // 0 when not compactly supported
    double effective_period = 0.0; // sub-torus period of a uniform tiling, else L
};

/// Deterministic sampling of the recipe on the grid. Throws on support
/// violations (bump tails above 1e-14 at the torus edge) and resolution
/// violations (fewer than 8 points across the bump width).
RealizedData realize(const DataRecipe& recipe, const Grid& grid);

/// Static blow-up conditions evaluated on one initial pair:
///   (TC1) E(0) > 0
///   (TC2) ||u0||^2 >= 2(2+eps)/eps * E(0)
///   (TC3) I(u0) < 0
///   (TC4) <u0, u1> > 0
struct StaticCertificate {
    double e0 = 0.0;
    double u0_norm_sq = 0.0;
    double i_u0 = 0.0;
    double inner_u0_u1 = 0.0;
    double eps = 0.0;
    double threshold = 0.0;  // 2(2+eps)/eps * E(0)
    bool tc1 = false, tc2 = false, tc3 = false, tc4 = false;

    bool all_pass() const { return tc1 && tc2 && tc3 && tc4; }
};

StaticCertificate check_theorem_conditions(const Field& u0, const Field& u1,
                                           const NonlinearityModel& model);

struct SynthesisResult {
    RealizedData data;
    DataRecipe recipe;
    StaticCertificate certificate;
    int bump_count = 1;
    double single_bump_energy = 0.0;
};

/// Plans a grid able to host a certified configuration at the requested
/// energy: K cosine bumps of radius r in cells of length 2r + gap, K and r
/// scaled with the target. h_target controls the lattice spacing.
Grid plan_certified_grid(double target_energy, double h_target = 0.1);

/// Constructs data passing all four static conditions with
/// E(0) in [target, 1.05*target]: a deterministic scan finds the per-bump
/// amplitude window, disjoint replication scales the energy by the bump
/// count, and bisection in the amplitude lands the bracket.
SynthesisResult synthesize_certified(const NonlinearityModel& model, const Grid& grid,
                                     double target_energy);

/// u0 = lambda * (ground state), u1 = 0: the sub-threshold family whose sign
/// of I separates global existence from blow-up. lambda = 1 is rejected.
std::pair<Field, Field> synthesize_subthreshold(double p, const Grid& grid, double lambda);

}  // namespace kglab
