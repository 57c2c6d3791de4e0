#include "rpv/context.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "rpv/error.hpp"

namespace rpv {

bool valid_identifier(const std::string& name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return name != "sqrt";
}

void DiffContext::add_var(std::string name, VarKind kind) {
  if (!valid_identifier(name)) throw Error("invalid variable name '" + name + "'");
  if (index_of(name)) throw VariableClash("variable '" + name + "' declared twice");
  names_.push_back(std::move(name));
  kinds_.push_back(kind);
  for (auto& d : derivations_)
    d.images.push_back(kind == VarKind::Generator ? VarImage{VarImage::Kind::Undefined, 0}
                                                  : VarImage{});
}

ContextPtr DiffContext::partial(std::vector<std::string> coordinates, std::int64_t sqrt_tag) {
  auto ctx = std::shared_ptr<DiffContext>(new DiffContext());
  ctx->sqrt_tag_ = sqrt_tag;
  for (auto& c : coordinates) ctx->add_var(c, VarKind::Coordinate);
  for (std::size_t k = 0; k < ctx->size(); ++k) {
    Derivation d{"d/d" + ctx->names_[k], std::vector<VarImage>(ctx->size())};
    d.images[k] = {VarImage::Kind::One, 0};
    ctx->derivations_.push_back(std::move(d));
  }
  return ctx;
}

ContextPtr DiffContext::kolchin(const DiffContext& base, std::vector<std::string> u_names) {
  if (base.kolchin_ || !base.vars_of_kind(VarKind::Generator).empty() ||
      !base.vars_of_kind(VarKind::Indeterminate).empty())
    throw Error("Kolchin reduction needs a plain partial context");
  if (u_names.size() != base.derivation_count())
    throw DimensionMismatch("need one indeterminate per derivation");
  auto ctx = std::shared_ptr<DiffContext>(new DiffContext());
  ctx->sqrt_tag_ = base.sqrt_tag_;
  ctx->kolchin_ = true;
  for (std::size_t i = 0; i < base.size(); ++i) ctx->add_var(base.names_[i], base.kinds_[i]);
  for (auto& u : u_names) {
    if (ctx->index_of(u)) throw VariableClash("indeterminate '" + u + "' clashes with a variable");
    ctx->add_var(u, VarKind::Indeterminate);
  }
  Derivation d{"D", std::vector<VarImage>(ctx->size())};
  for (std::size_t k = 0; k < base.derivation_count(); ++k) {
    auto coord = base.coordinate_of(k);
    if (!coord) throw Error("Kolchin reduction needs one coordinate per derivation");
    d.images[*coord] = {VarImage::Kind::Variable, base.size() + k};
  }
  for (std::size_t k = 0; k < u_names.size(); ++k)
    d.images[base.size() + k] = {VarImage::Kind::Truncated, 0};
  ctx->derivations_.push_back(std::move(d));
  return ctx;
}

ContextPtr DiffContext::with_generators(const std::vector<std::string>& names) const {
  auto ctx = std::shared_ptr<DiffContext>(new DiffContext(*this));
  for (auto& n : names) {
    if (ctx->index_of(n)) throw VariableClash("generator '" + n + "' clashes with a variable");
    ctx->add_var(n, VarKind::Generator);
  }
  return ctx;
}

ContextPtr DiffContext::reordered(const std::vector<std::string>& order) const {
  if (order.size() != size() || std::set<std::string>(order.begin(), order.end()).size() != size())
    throw Error("variable order must list every variable exactly once");
  std::vector<std::size_t> from(size());  // new index -> old index
  std::vector<std::size_t> to(size());    // old index -> new index
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto old = index_of(order[i]);
    if (!old) throw Error("unknown variable '" + order[i] + "' in variable order");
    from[i] = *old;
    to[*old] = i;
  }
  auto ctx = std::shared_ptr<DiffContext>(new DiffContext());
  ctx->sqrt_tag_ = sqrt_tag_;
  ctx->kolchin_ = kolchin_;
  for (std::size_t i = 0; i < size(); ++i) {
    ctx->names_.push_back(names_[from[i]]);
    ctx->kinds_.push_back(kinds_[from[i]]);
  }
  for (const auto& d : derivations_) {
    Derivation nd{d.name, std::vector<VarImage>(size())};
    for (std::size_t i = 0; i < size(); ++i) {
      VarImage img = d.images[from[i]];
      if (img.kind == VarImage::Kind::Variable) img.var = to[img.var];
      nd.images[i] = img;
    }
    ctx->derivations_.push_back(std::move(nd));
  }
  return ctx;
}

std::optional<std::size_t> DiffContext::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::optional<std::size_t> DiffContext::derivation_index(const std::string& name) const {
  for (std::size_t k = 0; k < derivations_.size(); ++k)
    if (derivations_[k].name == name) return k;
  // Partial derivations are also addressed by their coordinate name.
  for (std::size_t k = 0; k < derivations_.size(); ++k) {
    auto c = coordinate_of(k);
    if (c && names_[*c] == name) return k;
  }
  return std::nullopt;
}

std::optional<std::size_t> DiffContext::coordinate_of(std::size_t k) const {
  if (kolchin_) return std::nullopt;
  const auto& imgs = derivations_[k].images;
  for (std::size_t i = 0; i < imgs.size(); ++i)
    if (imgs[i].kind == VarImage::Kind::One && kinds_[i] == VarKind::Coordinate) return i;
  return std::nullopt;
}

std::vector<std::size_t> DiffContext::vars_of_kind(VarKind kind) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kinds_.size(); ++i)
    if (kinds_[i] == kind) out.push_back(i);
  return out;
}

bool same_context(const ContextPtr& a, const ContextPtr& b) {
  return a == b || (a && b && *a == *b);
}

}  // namespace rpv
