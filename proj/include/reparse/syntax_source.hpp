#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "reparse/kb.hpp"
#include "reparse/structures.hpp"

namespace reparse {

/// A node the attachment creates: a phrase of `category`/`tmpl` whose
/// `position` receives the node below it.
struct Projection {
  std::string category;
  std::size_t tmpl = 0;
  std::size_t position = 0;

  bool operator==(const Projection&) const = default;
};

/// Where a new node can go. `parent` is the frontier node receiving the
/// structure (Attach) or the node being wrapped (Adjoin); `tmpl` and
/// `position` address the receiving template. `creates` lists projected
/// nodes bottom-up; for Open sites its last element is the new root.
struct AttachmentSite {
  SiteKind kind = SiteKind::Attach;
  NodeId parent = 0;
  std::size_t tmpl = 0;
  std::size_t position = 0;
  std::vector<Projection> creates;
  int depth_rank = 0;  // 0 for the deepest node on the frontier

  // Nodes this site adds beyond the candidate itself.
  std::size_t created_count() const { return creates.size() + (kind == SiteKind::Adjoin ? 1 : 0); }
};

inline constexpr std::size_t kMaxProjection = 3;

class SyntaxSource {
 public:
  explicit SyntaxSource(const KnowledgeBase& kb) : kb_(&kb) {}

  // Every site on the right frontier of the fragment rooted at
  // `frontier_root` that can take `node`, directly or through a minimal
  // projection chain, including adjunction.
  std::vector<AttachmentSite> syntactic_candidates(const ParseState& state, NodeId frontier_root,
                                                   NodeId node) const;

  // One-step projections that start a new fragment with `node` at its
  // left corner.
  std::vector<AttachmentSite> open_candidates(const ParseState& state, NodeId node) const;

  bool expectation_satisfied(const AttachmentSite& site, const ParseState& state) const;

  bool check_features(const TemplateElement& element, const ParseNode& node) const;

  // Minimal-length chains lifting `node` to something `target` accepts.
  std::vector<std::vector<Projection>> projection_chains(const ParseNode& node,
                                                         const TemplateElement& target) const;

 private:
  const KnowledgeBase* kb_;
};

}  // namespace reparse
