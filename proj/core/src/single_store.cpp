#include "rmtt/single_store.hpp"

namespace rmtt {

SingleStore SingleStore::build(std::span<const Triple> triples) {
    Dictionary dict;
    std::vector<EncodedTriple> encoded;
    encoded.reserve(triples.size());
    for (const Triple& t : triples) encoded.push_back(dict.encode(t));
    return from_encoded(std::move(dict), std::move(encoded));
}

SingleStore SingleStore::from_encoded(Dictionary dict, std::vector<EncodedTriple> triples) {
    SingleStore store;
    store.dict_ = std::move(dict);
    for (PermOrder order : kAllOrders)
        store.indexes_[static_cast<std::size_t>(order)] = OrderedTripleIndex::build(triples, order);
    store.triple_count_ = store.indexes_[0].size();
    return store;
}

MatchResult SingleStore::match(const TriplePattern& pattern) const {
    const OrderedTripleIndex& idx = index(best_order(pattern));
    auto range = idx.range_scan(pattern);
    MatchResult result;
    result.rows.assign(range.begin(), range.end());
    result.row_tables.assign(result.rows.size(), 0);
    result.probed = {0};
    return result;
}

std::size_t SingleStore::estimate(const TriplePattern& pattern) const {
    return index(best_order(pattern)).estimate(pattern);
}

}  // namespace rmtt
