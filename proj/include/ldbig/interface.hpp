#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldbig {

enum class Polarity { positive, negative };

/// One locality of an interface: a pair of disjoint name sets.
struct Locality {
    std::set<std::string> plus;
    std::set<std::string> minus;

    auto operator<=>(const Locality&) const = default;
    bool operator==(const Locality&) const = default;
};

/// A local interface <X_0, ..., X_n>. Index 0 holds the global names and is
/// always present; width() is the number of non-global localities.
class LocalInterface {
public:
    LocalInterface();
    explicit LocalInterface(std::vector<Locality> localities);

    /// Interface with `width` empty localities besides the global one.
    static LocalInterface empty(std::size_t width);
    /// The unit <(∅,∅)>.
    static LocalInterface unit() { return LocalInterface(); }

    std::size_t width() const { return localities_.size() - 1; }
    const Locality& at(std::size_t locality) const;
    const Locality& global() const { return localities_.front(); }
    const std::vector<Locality>& localities() const { return localities_; }

    const std::set<std::string>& names(std::size_t locality, Polarity polarity) const;
    bool contains(std::size_t locality, Polarity polarity, const std::string& text) const;

    /// Adds a name; throws std::invalid_argument if it breaks disjointness.
    void add(std::size_t locality, Polarity polarity, const std::string& text);
    /// Appends a fresh locality and returns its index.
    std::size_t push_locality(Locality locality = {});

    /// Empty string when well-formed, otherwise a description of the problem.
    std::string check() const;

    bool operator==(const LocalInterface&) const = default;

private:
    std::vector<Locality> localities_;
};

/// Global-name renaming applied to the right operand of a juxtaposition when
/// its global names collide with the left operand's.
struct GlobalRenaming {
    std::map<std::string, std::string> plus;
    std::map<std::string, std::string> minus;

    bool empty() const { return plus.empty() && minus.empty(); }
};

/// X ⊗ Y. Colliding global names of `y` are tagged with a `'` suffix until
/// unique; the renaming used is written to `renaming` when given.
LocalInterface juxtapose(const LocalInterface& x, const LocalInterface& y,
                         GlobalRenaming* renaming = nullptr);

/// True when juxtaposing the two interfaces needs no tagging.
bool globals_disjoint(const LocalInterface& x, const LocalInterface& y);

std::string to_string(const LocalInterface& iface);

}  // namespace ldbig
