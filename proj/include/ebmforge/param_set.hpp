#pragma once

#include <ebmforge/graph.hpp>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ebmforge {

// Named parameter tensors making up theta. Leaves are replaced wholesale
// on assignment (graphs are immutable), so a model must re-fetch leaves
// each time it builds a graph.
class ParamSet {
 public:
  void add(const std::string& name, Tensor value) {
    for (const auto& e : entries_)
      if (e.first == name) throw std::invalid_argument("ParamSet: duplicate name " + name);
    entries_.emplace_back(name, leaf(std::move(value), name, true));
  }

  size_t count() const { return entries_.size(); }

  long total_size() const {
    long n = 0;
    for (const auto& e : entries_) n += e.second->value.size();
    return n;
  }

  const NodePtr& node(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.first == name) return e.second;
    throw std::out_of_range("ParamSet: no parameter " + name);
  }

  std::vector<NodePtr> leaves() const {
    std::vector<NodePtr> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.second);
    return out;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) out.push_back(e.first);
    return out;
  }

  Eigen::VectorXd flatten() const {
    Eigen::VectorXd out(total_size());
    long off = 0;
    for (const auto& e : entries_) {
      out.segment(off, e.second->value.size()) = e.second->value.as_vector();
      off += e.second->value.size();
    }
    return out;
  }

  void assign_flat(const Eigen::VectorXd& flat) {
    if (flat.size() != total_size())
      throw std::invalid_argument("ParamSet: flat size " + std::to_string(flat.size()) +
                                  " != " + std::to_string(total_size()));
    long off = 0;
    for (auto& e : entries_) {
      long n = e.second->value.size();
      e.second = leaf(Tensor(e.second->value.shape(), flat.segment(off, n).array()), e.first, true);
      off += n;
    }
  }

  void assign(const std::string& name, Tensor value) {
    for (auto& e : entries_) {
      if (e.first == name) {
        if (!e.second->value.same_shape(value))
          throw std::invalid_argument("ParamSet: shape change for " + name);
        e.second = leaf(std::move(value), name, true);
        return;
      }
    }
    throw std::out_of_range("ParamSet: no parameter " + name);
  }

 private:
  std::vector<std::pair<std::string, NodePtr>> entries_;
};

}  // namespace ebmforge
