#include "limitgen/serialize.hpp"

#include "limitgen/errors.hpp"

namespace limitgen {

namespace {

Json nats_to_json(const std::vector<Nat>& values) {
  Json arr = Json::array();
  for (const Nat& v : values) arr.push_back(v.str());
  return arr;
}

std::vector<Nat> nats_from_json(const Json& arr) {
  std::vector<Nat> out;
  for (const auto& v : arr) {
    if (v.is_string())
      out.push_back(Nat(v.get<std::string>()));
    else
      out.push_back(Nat(v.get<std::uint64_t>()));
  }
  return out;
}

}  // namespace

Json to_json(const SetExpr& set) {
  Json j;
  if (set.is_structured()) {
    const auto& rep = set.structured_rep();
    j["kind"] = "structured";
    Json system;
    system["type"] = rep.system->type_name();
    if (auto p = rep.system->param()) system["param"] = *p;
    j["system"] = system;
    j["cells"] = rep.cells;
    j["plus"] = nats_to_json(rep.plus);
    j["minus"] = nats_to_json(rep.minus);
    return j;
  }
  const auto& rep = set.opaque_rep();
  if (rep.builtin.empty())
    throw ConfigError("cannot serialize an unregistered opaque set");
  j["kind"] = "opaque";
  j["builtin"] = rep.builtin;
  j["params"] = rep.params;
  return j;
}

SetExpr set_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "structured") {
    const Json& system = j.at("system");
    CellSystemPtr sys = system_from_name(
        system.at("type").get<std::string>(),
        system.value("param", std::uint64_t{1}));
    return SetExpr::structured(sys, j.at("cells").get<std::vector<std::size_t>>(),
                               nats_from_json(j.value("plus", Json::array())),
                               nats_from_json(j.value("minus", Json::array())));
  }
  if (kind == "opaque")
    return opaque_builtin(
        j.at("builtin").get<std::string>(),
        j.value("params", std::map<std::string, std::uint64_t>{}));
  throw ConfigError("unknown SetExpr kind: " + kind);
}

Json to_json(const Collection& coll) {
  Json j;
  j["kind"] = "finite";
  Json langs = Json::array();
  for (std::size_t i = 1; i <= coll.size(); ++i)
    langs.push_back(to_json(coll.language(i).expr()));
  j["languages"] = langs;
  return j;
}

Collection collection_from_json(const Json& j) {
  if (j.at("kind").get<std::string>() != "finite")
    throw ConfigError("only finite collections are serializable");
  std::vector<Language> langs;
  for (const auto& l : j.at("languages")) langs.emplace_back(set_from_json(l));
  return Collection::finite(std::move(langs));
}

Json to_json(const HardInstance& inst) {
  Json j;
  j["collection"] = to_json(inst.collection);
  j["target_index"] = inst.target_index;
  Json cert;
  cert["kind"] = inst.certificate.kind;
  cert["k"] = inst.certificate.k;
  cert["n"] = inst.certificate.n;
  cert["width"] = inst.certificate.width;
  Json masks = Json::array();
  for (const SubsetMask& m : inst.certificate.masks) masks.push_back(m.bits);
  cert["masks"] = masks;
  j["certificate"] = cert;
  j["has_fixed_enumeration"] = static_cast<bool>(inst.fixed_enumeration);
  return j;
}

SetExpr opaque_builtin(const std::string& name,
                       const std::map<std::string, std::uint64_t>& params) {
  if (name == "squares") {
    auto member = [](const Nat& x) {
      Nat r = isqrt(x);
      return r * r == x;
    };
    auto enumerate = [](const Nat& n) { return (n - 1) * (n - 1); };
    return SetExpr::opaque(member, enumerate, name, params);
  }
  if (name == "powers") {
    Nat base = Nat(params.at("base"));
    if (base < 2) throw ConfigError("powers: base must be >= 2");
    auto member = [base](const Nat& x) {
      if (x < 1) return false;
      Nat v = 1;
      while (v < x) v *= base;
      return v == x;
    };
    auto enumerate = [base](const Nat& n) {
      Nat v = 1;
      for (Nat i = 1; i < n; ++i) v *= base;
      return v;
    };
    return SetExpr::opaque(member, enumerate, name, params);
  }
  if (name == "multiples") {
    Nat of = Nat(params.at("of"));
    if (of < 1) throw ConfigError("multiples: of must be >= 1");
    auto member = [of](const Nat& x) { return x % of == 0; };
    auto enumerate = [of](const Nat& n) { return (n - 1) * of; };
    return SetExpr::opaque(member, enumerate, name, params);
  }
  if (name == "factorial_blocks") {
    // values v with (2r)! < v <= (2r+1)! for some r >= 1
    auto member = [](const Nat& x) {
      if (x <= 2) return false;
      Nat fact = 1;
      for (Nat i = 1;; ++i) {
        fact *= i;
        if (fact >= x) {
          // x lies in (prev!, i!]; the block is kept when i is odd
          return Nat(i % 2) == 1 && i >= 3;
        }
      }
    };
    auto enumerate = [](const Nat& n) {
      Nat remaining = n;
      Nat fact = 1, prev = 1;
      for (Nat i = 1;; ++i) {
        fact *= i;
        if (Nat(i % 2) == 1 && i >= 3) {
          Nat block = fact - prev;  // (prev, fact]
          if (remaining <= block) return prev + remaining;
          remaining -= block;
        }
        prev = fact;
      }
    };
    return SetExpr::opaque(member, enumerate, name, params);
  }
  throw ConfigError("unknown opaque builtin: " + name);
}

}  // namespace limitgen
