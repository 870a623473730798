#include "gdiam/instance.hpp"

#include <fstream>
#include <stdexcept>
#include <type_traits>

namespace gdiam {

using nlohmann::json;

const char* kind_name(ObjKind k) {
  switch (k) {
    case ObjKind::UnitCube: return "unit_cube";
    case ObjKind::Box: return "box";
    default: return "ball";
  }
}

ObjKind parse_kind(const std::string& s) {
  if (s == "unit_cube") return ObjKind::UnitCube;
  if (s == "box") return ObjKind::Box;
  if (s == "ball") return ObjKind::Ball;
  throw std::invalid_argument("unknown object kind: " + s);
}

const Part* Instance::find_part(const std::string& name) const {
  for (const auto& p : parts)
    if (p.name == name) return &p;
  return nullptr;
}

Part& Instance::part(const std::string& name) {
  for (auto& p : parts)
    if (p.name == name) return p;
  parts.push_back(Part{name, {}, {}});
  return parts.back();
}

std::size_t Instance::size() const {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.objects.size();
  return n;
}

std::vector<GeomObject<Rat>> Instance::all_objects() const {
  std::vector<GeomObject<Rat>> out;
  for (const auto& p : parts) out.insert(out.end(), p.objects.begin(), p.objects.end());
  return out;
}

namespace {

json num_to_json(const Rat& v, NumericMode mode) {
  if (mode == NumericMode::Float) return v.get_d();
  return format_rational(v);
}

Rat num_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return parse_rational(std::to_string(j.get<long long>()));
  if (j.is_number()) return to_rational(j.get<double>());
  throw std::invalid_argument("expected number or \"num/den\" string");
}

json point_to_json(const PointD<Rat>& p, NumericMode mode) {
  json a = json::array();
  for (const auto& c : p.coords) a.push_back(num_to_json(c, mode));
  return a;
}

PointD<Rat> point_from_json(const json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) throw DimensionError("point has wrong dimension");
  std::vector<Rat> c;
  for (const auto& x : j) c.push_back(num_from_json(x));
  return PointD<Rat>(std::move(c));
}

}  // namespace

json to_json(const Instance& inst) {
  json j;
  j["kind"] = kind_name(inst.kind);
  j["dim"] = inst.dim;
  j["numeric_mode"] = inst.numeric_mode == NumericMode::Rational ? "rational" : "float";
  json parts = json::array();
  for (const auto& part : inst.parts) {
    json pj;
    pj["name"] = part.name;
    json objs = json::array();
    for (const auto& o : part.objects) {
      if (object_kind(o) != inst.kind) throw std::invalid_argument("object kind differs from instance kind");
      switch (inst.kind) {
        case ObjKind::UnitCube:
          objs.push_back(point_to_json(std::get<0>(o).center, inst.numeric_mode));
          break;
        case ObjKind::Box: {
          const auto& b = std::get<1>(o);
          objs.push_back({{"lo", point_to_json(b.lo, inst.numeric_mode)}, {"hi", point_to_json(b.hi, inst.numeric_mode)}});
          break;
        }
        case ObjKind::Ball: {
          const auto& b = std::get<2>(o);
          objs.push_back({{"center", point_to_json(b.center, inst.numeric_mode)},
                          {"radius_sq", num_to_json(b.radius_sq, inst.numeric_mode)}});
          break;
        }
      }
    }
    pj["objects"] = std::move(objs);
    if (!part.labels.empty()) {
      json labels = json::array();
      for (const auto& l : part.labels) labels.push_back({{"type", l.type}, {"ids", l.ids}});
      pj["labels"] = std::move(labels);
    }
    parts.push_back(std::move(pj));
  }
  j["parts"] = std::move(parts);
  return j;
}

Instance instance_from_json(const json& j) {
  Instance inst;
  inst.kind = parse_kind(j.at("kind").get<std::string>());
  inst.dim = j.at("dim").get<int>();
  if (inst.dim < 1 || inst.dim > kMaxDim) throw DimensionError("instance dimension out of range");
  std::string mode = j.value("numeric_mode", "rational");
  if (mode == "rational") inst.numeric_mode = NumericMode::Rational;
  else if (mode == "float") inst.numeric_mode = NumericMode::Float;
  else throw std::invalid_argument("unknown numeric_mode: " + mode);
  for (const auto& pj : j.at("parts")) {
    Part part;
    part.name = pj.at("name").get<std::string>();
    for (const auto& oj : pj.at("objects")) {
      switch (inst.kind) {
        case ObjKind::UnitCube:
          part.objects.emplace_back(UnitCubeObj<Rat>{point_from_json(oj, inst.dim)});
          break;
        case ObjKind::Box:
          part.objects.emplace_back(AxisBoxD<Rat>(point_from_json(oj.at("lo"), inst.dim), point_from_json(oj.at("hi"), inst.dim)));
          break;
        case ObjKind::Ball: {
          Rat r2 = oj.contains("radius_sq") ? num_from_json(oj.at("radius_sq"))
                                            : Rat(num_from_json(oj.at("radius")) * num_from_json(oj.at("radius")));
          part.objects.emplace_back(BallD<Rat>::from_radius_sq(point_from_json(oj.at("center"), inst.dim), r2));
          break;
        }
      }
    }
    if (pj.contains("labels")) {
      for (const auto& lj : pj.at("labels"))
        part.labels.push_back(SourceLabel{lj.at("type").get<std::string>(), lj.at("ids").get<std::vector<int>>()});
      if (part.labels.size() != part.objects.size()) throw std::invalid_argument("label count differs from object count");
    }
    inst.parts.push_back(std::move(part));
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  json j;
  in >> j;
  return instance_from_json(j);
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << to_json(inst).dump(1) << "\n";
}

template <class T>
std::vector<GeomObject<T>> convert_objects(const std::vector<GeomObject<Rat>>& objs) {
  if constexpr (std::is_same_v<T, Rat>) {
    return objs;
  } else {
    auto cvt = [](const PointD<Rat>& p) {
      std::vector<double> c;
      for (const auto& x : p.coords) c.push_back(x.get_d());
      return PointD<double>(std::move(c));
    };
    std::vector<GeomObject<double>> out;
    out.reserve(objs.size());
    for (const auto& o : objs) {
      switch (o.index()) {
        case 0: out.emplace_back(UnitCubeObj<double>{cvt(std::get<0>(o).center)}); break;
        case 1: out.emplace_back(AxisBoxD<double>(cvt(std::get<1>(o).lo), cvt(std::get<1>(o).hi))); break;
        default: out.emplace_back(BallD<double>::from_radius_sq(cvt(std::get<2>(o).center), std::get<2>(o).radius_sq.get_d()));
      }
    }
    return out;
  }
}

template std::vector<GeomObject<double>> convert_objects<double>(const std::vector<GeomObject<Rat>>&);
template std::vector<GeomObject<Rat>> convert_objects<Rat>(const std::vector<GeomObject<Rat>>&);

std::vector<std::array<double, 3>> centers3(const Part& part) {
  std::vector<std::array<double, 3>> out;
  for (const auto& o : part.objects) {
    if (o.index() != 0) throw std::invalid_argument("expected unit cubes");
    const auto& c = std::get<0>(o).center;
    if (c.dim() != 3) throw DimensionError("expected 3D unit cubes");
    out.push_back({c[0].get_d(), c[1].get_d(), c[2].get_d()});
  }
  return out;
}

}  // namespace gdiam
