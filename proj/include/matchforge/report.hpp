#ifndef MATCHFORGE_REPORT_HPP
#define MATCHFORGE_REPORT_HPP

#include <string>
#include <utility>

namespace matchforge {

/// Outcome of an exhaustive check. Witnesses are produced in the checker's
/// canonical scan order, so the first (and reported) witness is minimal and
/// byte-stable across runs.
struct Report {
  bool pass = true;
  std::string witness;  // empty iff pass

  static Report ok() { return Report{}; }
  static Report fail(std::string w) { return Report{false, std::move(w)}; }
  explicit operator bool() const { return pass; }
};

}  // namespace matchforge

#endif
