#include "rmtt/perm_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace rmtt {

namespace {

// Component positions for each order, e.g. POS reads (p, o, s).
constexpr std::array<std::array<int, 3>, 6> kComponents = {{
    {0, 1, 2},  // SPO
    {0, 2, 1},  // SOP
    {1, 0, 2},  // PSO
    {1, 2, 0},  // POS
    {2, 0, 1},  // OSP
    {2, 1, 0},  // OPS
}};

TermId component(const EncodedTriple& t, int pos) {
    switch (pos) {
        case 0: return t.s;
        case 1: return t.p;
        default: return t.o;
    }
}

std::optional<TermId> component(const TriplePattern& p, int pos) {
    switch (pos) {
        case 0: return p.s;
        case 1: return p.p;
        default: return p.o;
    }
}

std::array<TermId, 3> key_of(const EncodedTriple& t, PermOrder order) {
    const auto& c = kComponents[static_cast<std::size_t>(order)];
    return {component(t, c[0]), component(t, c[1]), component(t, c[2])};
}

}  // namespace

std::string to_string(PermOrder order) {
    switch (order) {
        case PermOrder::SPO: return "SPO";
        case PermOrder::SOP: return "SOP";
        case PermOrder::PSO: return "PSO";
        case PermOrder::POS: return "POS";
        case PermOrder::OSP: return "OSP";
        case PermOrder::OPS: return "OPS";
    }
    return "?";
}

bool matches(const TriplePattern& pattern, const EncodedTriple& t) {
    return (!pattern.s || *pattern.s == t.s) && (!pattern.p || *pattern.p == t.p) &&
           (!pattern.o || *pattern.o == t.o);
}

OrderedTripleIndex OrderedTripleIndex::build(std::span<const EncodedTriple> triples,
                                             PermOrder order) {
    OrderedTripleIndex index;
    index.order_ = order;
    index.rows_.assign(triples.begin(), triples.end());
    std::sort(index.rows_.begin(), index.rows_.end(),
              [order](const EncodedTriple& a, const EncodedTriple& b) {
                  return key_of(a, order) < key_of(b, order);
              });
    index.rows_.erase(std::unique(index.rows_.begin(), index.rows_.end()), index.rows_.end());
    return index;
}

bool OrderedTripleIndex::compatible(const TriplePattern& pattern) const {
    const auto& c = kComponents[static_cast<std::size_t>(order_)];
    bool unbound_seen = false;
    for (int i = 0; i < 3; ++i) {
        if (component(pattern, c[i])) {
            if (unbound_seen) return false;
        } else {
            unbound_seen = true;
        }
    }
    return true;
}

std::span<const EncodedTriple> OrderedTripleIndex::range_scan(
    const TriplePattern& pattern) const {
    if (!compatible(pattern))
        throw std::invalid_argument("range_scan: pattern's bound positions are not a prefix of " +
                                    to_string(order_));
    const auto& c = kComponents[static_cast<std::size_t>(order_)];
    std::array<TermId, 3> lo = {0, 0, 0};
    std::array<TermId, 3> hi = {~TermId{0}, ~TermId{0}, ~TermId{0}};
    for (int i = 0; i < 3; ++i) {
        if (auto v = component(pattern, c[i])) {
            lo[i] = *v;
            hi[i] = *v;
        } else {
            break;
        }
    }
    auto cmp = [this](const EncodedTriple& t, const std::array<TermId, 3>& key) {
        return key_of(t, order_) < key;
    };
    auto first = std::lower_bound(rows_.begin(), rows_.end(), lo, cmp);
    auto last = std::upper_bound(first, rows_.end(), hi,
                                 [this](const std::array<TermId, 3>& key, const EncodedTriple& t) {
                                     return key < key_of(t, order_);
                                 });
    return {first, last};
}

std::size_t OrderedTripleIndex::estimate(const TriplePattern& pattern) const {
    return range_scan(pattern).size();
}

PermOrder best_order(const TriplePattern& pattern) {
    PermOrder best = PermOrder::SPO;
    int best_len = -1;
    for (PermOrder order : kAllOrders) {
        const auto& c = kComponents[static_cast<std::size_t>(order)];
        int len = 0;
        for (int i = 0; i < 3; ++i) {
            if (component(pattern, c[i])) ++len;
            else break;
        }
        // Compatible orders score by full coverage of the bound set.
        int bound = (pattern.s ? 1 : 0) + (pattern.p ? 1 : 0) + (pattern.o ? 1 : 0);
        if (len == bound && len > best_len) {
            best = order;
            best_len = len;
        }
    }
    return best;
}

}  // namespace rmtt
