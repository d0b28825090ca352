#include "ldbig/interface.hpp"

#include <sstream>

namespace ldbig {

LocalInterface::LocalInterface() : localities_(1) {}

LocalInterface::LocalInterface(std::vector<Locality> localities)
    : localities_(std::move(localities)) {
    if (localities_.empty())
        localities_.emplace_back();
}

LocalInterface LocalInterface::empty(std::size_t width) {
    return LocalInterface(std::vector<Locality>(width + 1));
}

const Locality& LocalInterface::at(std::size_t locality) const {
    if (locality >= localities_.size())
        throw std::out_of_range("locality " + std::to_string(locality) + " out of range");
    return localities_[locality];
}

const std::set<std::string>& LocalInterface::names(std::size_t locality, Polarity polarity) const {
    const auto& l = at(locality);
    return polarity == Polarity::positive ? l.plus : l.minus;
}

bool LocalInterface::contains(std::size_t locality, Polarity polarity,
                              const std::string& text) const {
    if (locality >= localities_.size())
        return false;
    return names(locality, polarity).count(text) != 0;
}

void LocalInterface::add(std::size_t locality, Polarity polarity, const std::string& text) {
    if (locality >= localities_.size())
        throw std::out_of_range("locality " + std::to_string(locality) + " out of range");
    if (text.empty())
        throw std::invalid_argument("empty name");
    auto& l = localities_[locality];
    auto& other = polarity == Polarity::positive ? l.minus : l.plus;
    if (other.count(text))
        throw std::invalid_argument("name '" + text + "' is both positive and negative at locality " +
                                    std::to_string(locality));
    (polarity == Polarity::positive ? l.plus : l.minus).insert(text);
}

std::size_t LocalInterface::push_locality(Locality locality) {
    localities_.push_back(std::move(locality));
    return localities_.size() - 1;
}

std::string LocalInterface::check() const {
    for (std::size_t i = 0; i < localities_.size(); ++i) {
        for (const auto& n : localities_[i].plus) {
            if (localities_[i].minus.count(n))
                return "name '" + n + "' is both positive and negative at locality " +
                       std::to_string(i);
            if (n.empty() || n.find_first_of(" \t\r\n") != std::string::npos)
                return "malformed name '" + n + "'";
        }
        for (const auto& n : localities_[i].minus)
            if (n.empty() || n.find_first_of(" \t\r\n") != std::string::npos)
                return "malformed name '" + n + "'";
    }
    return {};
}

bool globals_disjoint(const LocalInterface& x, const LocalInterface& y) {
    const auto& gx = x.global();
    for (const auto* set : {&y.global().plus, &y.global().minus})
        for (const auto& n : *set)
            if (gx.plus.count(n) || gx.minus.count(n))
                return false;
    return true;
}

LocalInterface juxtapose(const LocalInterface& x, const LocalInterface& y,
                         GlobalRenaming* renaming) {
    std::vector<Locality> result;
    result.reserve(x.width() + y.width() + 1);
    result.push_back(x.global());

    std::set<std::string> taken;
    for (const auto* set : {&x.global().plus, &x.global().minus, &y.global().plus, &y.global().minus})
        taken.insert(set->begin(), set->end());

    GlobalRenaming local;
    auto place = [&](const std::set<std::string>& from, std::set<std::string>& into,
                     std::map<std::string, std::string>& map) {
        for (const auto& n : from) {
            if (!x.global().plus.count(n) && !x.global().minus.count(n)) {
                into.insert(n);
                continue;
            }
            std::string fresh = n + "'";
            while (taken.count(fresh))
                fresh += "'";
            taken.insert(fresh);
            map[n] = fresh;
            into.insert(fresh);
        }
    };
    place(y.global().plus, result[0].plus, local.plus);
    place(y.global().minus, result[0].minus, local.minus);

    for (std::size_t i = 1; i <= x.width(); ++i)
        result.push_back(x.at(i));
    for (std::size_t i = 1; i <= y.width(); ++i)
        result.push_back(y.at(i));
    if (renaming)
        *renaming = std::move(local);
    return LocalInterface(std::move(result));
}

std::string to_string(const LocalInterface& iface) {
    std::ostringstream os;
    os << "<";
    for (std::size_t i = 0; i <= iface.width(); ++i) {
        if (i)
            os << ", ";
        os << "({";
        bool first = true;
        for (const auto& n : iface.at(i).plus) {
            os << (first ? "" : ",") << n;
            first = false;
        }
        os << "},{";
        first = true;
        for (const auto& n : iface.at(i).minus) {
            os << (first ? "" : ",") << n;
            first = false;
        }
        os << "})";
    }
    os << ">";
    return os.str();
}

}  // namespace ldbig
