#pragma once

#include <optional>

#include "delta/geometry.hpp"
#include "delta/vec3.hpp"

namespace delta {

/// Maps a base-frame point into a chain's local frame: rotate by -azimuth so
/// the chain lies along +x, then translate the shoulder to the origin. Local
/// +x points radially outward (base centre toward shoulder), +z up, +y
/// completes the right-handed frame.
Vec3 chain_frame(const DeltaGeometry& g, int chain, const Vec3& p);

/// Inverse of chain_frame.
Vec3 chain_to_base(const DeltaGeometry& g, int chain, const Vec3& p_local);

/// Elbow position in the chain frame for shoulder angle theta. theta = 0
/// points the upper arm radially inward along -x; positive theta rotates the
/// elbow downward (-z).
Vec3 elbow_local(const DeltaGeometry& g, double theta);

/// Elbow position in the base frame.
Vec3 elbow_base(const DeltaGeometry& g, int chain, double theta);

enum class IkError {
  kOk,
  kUnreachable,   // chain closure has no real root
  kJointLimit,    // selected root violates the joint limits
  kInvalidInput,  // non-finite target
};

struct IkResult {
  JointAngles angles;
  IkError error = IkError::kOk;
  int chain = -1;  // offending chain for kUnreachable / kJointLimit

  bool ok() const { return error == IkError::kOk; }
};

/// Both closure roots of one chain for a wrist target, wrapped to (-pi, pi].
/// first = the selected branch (smaller chain-frame elbow x, i.e. larger
/// cos(theta); ties broken toward the positive root), second = the other.
struct ChainRoots {
  double selected;
  double other;
  bool solvable;
};
ChainRoots chain_roots(const DeltaGeometry& g, int chain, const Vec3& p);

/// Closed-form inverse kinematics. Solves each chain independently and
/// applies the branch rule above, then checks joint limits.
IkResult inverse_kinematics(const DeltaGeometry& g, const Vec3& p,
                            const JointLimits& limits);

/// Branch-stable variant for streaming targets: per chain, picks the root
/// closest to the previous angle instead of the static branch rule.
IkResult inverse_kinematics_continuous(const DeltaGeometry& g, const Vec3& p,
                                       const JointAngles& previous,
                                       const JointLimits& limits);

enum class FkError {
  kOk,
  kNoIntersection,    // wrist spheres do not meet
  kAboveBasePlane,    // only the z >= 0 branch exists, pose is ambiguous
  kInvalidInput,
};

struct FkResult {
  Vec3 position;
  FkError error = FkError::kOk;

  bool ok() const { return error == FkError::kOk; }
};

/// Forward kinematics by three-sphere intersection about the elbows, radius
/// forearm each. Selects the below-base-plane (z < 0) solution; when both
/// candidates lie below, prefers the one whose inverse solution reproduces
/// the input angles.
FkResult forward_kinematics(const DeltaGeometry& g, const JointAngles& angles);

/// Central-difference Jacobian d(position)/d(theta), step h radians.
/// Empty when any probe configuration fails forward kinematics.
std::optional<Mat3> jacobian(const DeltaGeometry& g, const JointAngles& angles,
                             double h = 1e-6);

/// True when inverse kinematics succeeds within the limits.
bool reachable(const DeltaGeometry& g, const Vec3& p, const JointLimits& limits);

}  // namespace delta
