#include "gbmr/identification.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

namespace gbmr {

namespace {

std::string fmt_length(double meters) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << meters << " m";
  return os.str();
}

}  // namespace

std::vector<double> TubeCatalog::nominal_lengths() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const TubeEntry& e : entries) out.push_back(e.length);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IdentificationResult identify_layer(const Vec3& point, const GroundPlane& ground,
                                    const TemplateCatalog& catalog) {
  if (catalog.templates.empty()) throw Error(ErrorCode::invalid_catalog, "template catalog is empty");
  const double height = ground.height(point);
  if (height < 0.0) {
    throw Error(ErrorCode::below_ground, "measured point is " + fmt_length(-height) + " below ground");
  }

  const auto& ts = catalog.templates;
  auto it = std::lower_bound(ts.begin(), ts.end(), height,
                             [](const LayerTemplate& t, double h) { return t.height < h; });
  const LayerTemplate* best = nullptr;
  if (it != ts.end()) best = &*it;
  if (it != ts.begin()) {
    const LayerTemplate& below = *std::prev(it);
    if (!best || std::abs(below.height - height) <= std::abs(best->height - height)) best = &below;
  }
  const double deviation = std::abs(best->height - height);
  if (!within_tolerance(deviation, catalog.tolerance)) {
    throw Error(ErrorCode::no_match, "no layer within tolerance of height " + fmt_length(height) +
                                         "; re-measure the board top");
  }

  IdentificationResult r;
  r.kind = IdentifiedKind::layer;
  r.entry = best->layer;
  r.nominal = best->height;
  r.measured = height;
  r.deviation = deviation;
  const RigidTransform lift{Quat::Identity(), Vec3(0.0, 0.0, height)};
  r.payload.frame_pose = ground.frame.compose(lift);
  r.payload.scale_hint = 1.0;
  r.payload.notation = best->label.empty() ? "Layer " + std::to_string(best->layer) : best->label;
  for (const Vec2& v : best->outline) r.outline.push_back(r.payload.frame_pose.apply({v.x(), v.y(), 0.0}));
  for (const Vec2& v : best->rod_holes) r.holes.push_back(r.payload.frame_pose.apply({v.x(), v.y(), 0.0}));
  return r;
}

IdentificationResult identify_tube(const Vec3& p1, const Vec3& p2, const TubeCatalog& catalog,
                                   TubeAssignments& assigned) {
  const double length = (p2 - p1).norm();
  if (length < 1e-9) throw Error(ErrorCode::degenerate_geometry, "tube end points coincide");

  const std::vector<double> nominals = catalog.nominal_lengths();
  const double tol = catalog.tolerance;
  auto lo = std::lower_bound(nominals.begin(), nominals.end(), length - tol - kInclusiveSlack);
  std::vector<double> hits;
  for (auto it = lo; it != nominals.end() && *it <= length + tol + kInclusiveSlack; ++it) {
    if (within_tolerance(std::abs(*it - length), tol)) hits.push_back(*it);
  }
  if (hits.empty()) {
    throw Error(ErrorCode::no_match, "no tube length within tolerance of " + fmt_length(length) +
                                         "; re-measure the tube");
  }
  if (hits.size() > 1) {
    throw Error(ErrorCode::ambiguous_match, "measured length " + fmt_length(length) +
                                                " matches more than one nominal length");
  }

  const TubeEntry* pick = nullptr;
  for (const TubeEntry& e : catalog.entries) {
    if (e.length != hits.front() || assigned.contains(e.id)) continue;
    if (!pick || e.id < pick->id) pick = &e;
  }
  if (!pick) {
    throw Error(ErrorCode::all_assigned,
                "every tube of length " + fmt_length(hits.front()) + " is already placed");
  }
  assigned.insert(pick->id);

  IdentificationResult r;
  r.kind = IdentifiedKind::tube;
  r.entry = pick->id;
  r.nominal = pick->length;
  r.measured = length;
  r.deviation = std::abs(pick->length - length);
  r.payload.frame_pose = pick->frame_pose;
  r.payload.tower_pose = pick->tower_pose;
  r.payload.scale_hint = kTowerScaleHint;
  r.payload.notation = "Tube " + std::to_string(pick->id) + ", frame " + std::to_string(pick->frame) +
                       ", " + fmt_length(pick->length);
  return r;
}

std::vector<std::string> validate_catalog(const TemplateCatalog& catalog) {
  std::vector<std::string> v;
  if (catalog.templates.empty()) v.push_back("catalog has no entries");
  if (!(catalog.tolerance > 0.0)) v.push_back("tolerance must be positive");
  std::set<int> layers;
  for (std::size_t i = 0; i < catalog.templates.size(); ++i) {
    const LayerTemplate& t = catalog.templates[i];
    const std::string name = "layer " + std::to_string(t.layer);
    if (!layers.insert(t.layer).second) v.push_back("duplicate id: " + name);
    if (!(t.height >= 0.0)) v.push_back(name + ": negative height");
    if (t.outline.size() < 4 || t.outline.front() != t.outline.back()) {
      v.push_back(name + ": outline is not closed");
    }
    if (i > 0) {
      const double gap = t.height - catalog.templates[i - 1].height;
      if (gap <= 0.0) {
        v.push_back(name + ": heights not strictly increasing");
      } else if (gap <= 2 * catalog.tolerance) {
        v.push_back(name + ": gap " + fmt_length(gap) + " to previous layer <= 2x tolerance");
      }
    }
  }
  return v;
}

std::vector<std::string> validate_catalog(const TubeCatalog& catalog) {
  std::vector<std::string> v;
  if (catalog.entries.empty()) v.push_back("catalog has no entries");
  if (!(catalog.tolerance > 0.0)) v.push_back("tolerance must be positive");
  std::set<int> ids;
  for (const TubeEntry& e : catalog.entries) {
    const std::string name = "tube " + std::to_string(e.id);
    if (!ids.insert(e.id).second) v.push_back("duplicate id: " + name);
    if (!(e.length > 0.0)) v.push_back(name + ": length must be positive");
    if (e.frame < 1 || e.frame > 3) v.push_back(name + ": frame id must be 1, 2 or 3");
    for (const RigidTransform* pose : {&e.frame_pose, &e.tower_pose}) {
      try {
        pose->validate();
      } catch (const Error& err) {
        v.push_back(name + ": " + err.what());
      }
    }
  }
  const std::vector<double> nominals = catalog.nominal_lengths();
  for (std::size_t i = 1; i < nominals.size(); ++i) {
    const double gap = nominals[i] - nominals[i - 1];
    if (gap <= 2 * catalog.tolerance) {
      v.push_back("nominal lengths " + fmt_length(nominals[i - 1]) + " and " + fmt_length(nominals[i]) +
                  " are within 2x tolerance");
    }
  }
  if (catalog.expected_entries && *catalog.expected_entries != catalog.entries.size()) {
    v.push_back("count mismatch: expected " + std::to_string(*catalog.expected_entries) + " entries, found " +
                std::to_string(catalog.entries.size()));
  }
  if (catalog.expected_unique_lengths && *catalog.expected_unique_lengths != nominals.size()) {
    v.push_back("count mismatch: expected " + std::to_string(*catalog.expected_unique_lengths) +
                " unique lengths, found " + std::to_string(nominals.size()));
  }
  return v;
}

}  // namespace gbmr
