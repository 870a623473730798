#pragma once

#include "gdiam/geom.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gdiam {

enum class ObjKind { UnitCube, Box, Ball };
enum class NumericMode { Rational, Float };

const char* kind_name(ObjKind k);
ObjKind parse_kind(const std::string& s);

template <class T>
struct UnitCubeObj {
  PointD<T> center;
};

template <class T>
using GeomObject = std::variant<UnitCubeObj<T>, AxisBoxD<T>, BallD<T>>;

template <class T>
ObjKind object_kind(const GeomObject<T>& o) {
  return static_cast<ObjKind>(o.index());
}

template <class T>
int object_dim(const GeomObject<T>& o) {
  return std::visit([](const auto& x) {
    if constexpr (requires { x.center; }) return x.center.dim();
    else return x.dim();
  }, o);
}

// Closed-object intersection for two objects of the same kind.
template <class T>
bool objects_intersect(const GeomObject<T>& a, const GeomObject<T>& b) {
  if (a.index() != b.index()) throw std::invalid_argument("mixed object kinds");
  switch (a.index()) {
    case 0: {
      const auto& p = std::get<0>(a).center;
      const auto& q = std::get<0>(b).center;
      require_same_dim(p.dim(), q.dim());
      for (int i = 0; i < p.dim(); ++i) {
        if (p[i] - q[i] > 1 || q[i] - p[i] > 1) return false;
      }
      return true;
    }
    case 1: return boxes_intersect(std::get<1>(a), std::get<1>(b));
    default: return balls_intersect(std::get<2>(a), std::get<2>(b));
  }
}

// Optional provenance of an object in a generated instance, e.g. {"p", {a, b}}.
struct SourceLabel {
  std::string type;
  std::vector<int> ids;
  bool operator==(const SourceLabel&) const = default;
};

struct Part {
  std::string name;
  std::vector<GeomObject<Rat>> objects;
  std::vector<SourceLabel> labels;  // empty or one per object
};

struct Instance {
  ObjKind kind = ObjKind::UnitCube;
  int dim = 3;
  NumericMode numeric_mode = NumericMode::Rational;
  std::vector<Part> parts;

  const Part* find_part(const std::string& name) const;
  Part& part(const std::string& name);  // creates if missing
  std::size_t size() const;
  // All objects in part order (P, Q, R, S or V).
  std::vector<GeomObject<Rat>> all_objects() const;
};

nlohmann::json to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

template <class T>
std::vector<GeomObject<T>> convert_objects(const std::vector<GeomObject<Rat>>& objs);

// Plain 3D centers of a unit-cube part, as doubles.
std::vector<std::array<double, 3>> centers3(const Part& part);

}  // namespace gdiam
