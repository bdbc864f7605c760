#include "rmtt/planner.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "rmtt/ntriples.hpp"

namespace rmtt {

namespace {

constexpr TermId kUnset = ~TermId{0};

char position_of(const bgp::PatternAst& pattern, const std::string& var) {
    // s > p > o priority when a variable occurs more than once.
    if (pattern[0].is_var() && pattern[0].var == var) return 's';
    if (pattern[1].is_var() && pattern[1].var == var) return 'p';
    return 'o';
}

std::vector<TableId> sorted_union(const std::vector<TableId>& a, const std::vector<TableId>& b) {
    std::vector<TableId> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<TableId> sorted_intersection(const std::vector<TableId>& a,
                                         const std::vector<TableId>& b) {
    std::vector<TableId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool intersects(const std::vector<TableId>& a, const std::vector<TableId>& b) {
    return !sorted_intersection(a, b).empty();
}

}  // namespace

std::string to_string(EngineKind kind) {
    switch (kind) {
        case EngineKind::Single: return "single";
        case EngineKind::Vp: return "vp";
        case EngineKind::RmttSound: return "rmtt-sound";
        case EngineKind::RmttPruned: return "rmtt-pruned";
    }
    return "?";
}

const Dictionary& EngineView::dict() const {
    switch (kind) {
        case EngineKind::Single: return single->dict();
        case EngineKind::Vp: return vp->dict();
        default: return rmtt->dict();
    }
}

std::size_t EngineView::estimate(const bgp::ResolvedPattern& p) const {
    if (p.impossible) return 0;
    switch (kind) {
        case EngineKind::Single: return single->estimate(p.pattern);
        case EngineKind::Vp: return vp->estimate(p.pattern);
        default: return rmtt->estimate(p.pattern);
    }
}

std::vector<TableId> EngineView::scan_tables(const bgp::ResolvedPattern& p) const {
    if (p.impossible) return {};
    switch (kind) {
        case EngineKind::Single:
            return {0};
        case EngineKind::Vp: {
            std::vector<TableId> out;
            if (p.pattern.p) {
                if (vp->tables().contains(*p.pattern.p)) out.push_back(*p.pattern.p);
            } else {
                for (const auto& [pid, table] : vp->tables()) out.push_back(pid);
            }
            return out;
        }
        default: {
            std::vector<TableId> out;
            for (int i = 0; i < 2; ++i)
                if (rmtt->estimate_in_twin(i, p.pattern) > 0) out.push_back(static_cast<TableId>(i));
            return out;
        }
    }
}

std::string EngineView::table_name(TableId id) const {
    switch (kind) {
        case EngineKind::Single: return "T";
        case EngineKind::Vp: return "P(" + nt::serialize_term(dict().decode(id)) + ")";
        default: return id == 0 ? "twin0" : "twin1";
    }
}

std::size_t Plan::self_join_count() const {
    std::size_t n = 0;
    for (const PlanStep& step : steps)
        if (step.self_join) ++n;
    return n;
}

Plan plan(const bgp::BgpQuery& query, const EngineView& engine) {
    const Dictionary& dict = engine.dict();
    const bool pruned = engine.kind == EngineKind::RmttPruned;

    Plan result;
    result.engine = engine.kind;
    result.projection = query.projection();

    struct Candidate {
        std::size_t index;
        bgp::ResolvedPattern resolved;
        std::size_t estimate;
        bool used = false;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < query.patterns.size(); ++i) {
        Candidate c{i, bgp::to_triple_pattern(query.patterns[i], dict), 0, false};
        c.estimate = engine.estimate(c.resolved);
        if (c.resolved.impossible) result.definitely_empty = true;
        candidates.push_back(std::move(c));
    }

    // Provenance of each bound variable's most recent binding and the
    // pattern it came from.
    std::unordered_map<std::string, std::vector<TableId>> var_tables;
    std::unordered_map<std::string, std::size_t> var_binder;  // pattern index

    auto vars_of = [&](std::size_t index) {
        std::vector<std::string> vars;
        for (const bgp::PatternTerm& t : query.patterns[index])
            if (t.is_var() && std::find(vars.begin(), vars.end(), t.var) == vars.end())
                vars.push_back(t.var);
        return vars;
    };

    for (std::size_t planned = 0; planned < candidates.size(); ++planned) {
        std::size_t pick = candidates.size();
        bool pick_connected = false;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (candidates[i].used) continue;
            bool connected = false;
            for (const std::string& v : vars_of(candidates[i].index))
                if (var_tables.contains(v)) connected = true;
            if (planned == 0) connected = true;  // step 0 has no connectivity requirement
            if (pick == candidates.size() || (connected && !pick_connected) ||
                (connected == pick_connected &&
                 candidates[i].estimate < candidates[pick].estimate)) {
                pick = i;
                pick_connected = connected;
            }
        }
        Candidate& c = candidates[pick];
        c.used = true;

        PlanStep step;
        step.pattern_index = c.index;
        step.pattern = query.patterns[c.index];
        step.resolved = c.resolved;
        step.estimate = c.estimate;
        step.prov_right = engine.scan_tables(c.resolved);

        if (planned > 0) {
            for (const std::string& v : vars_of(c.index)) {
                auto it = var_binder.find(v);
                if (it == var_binder.end()) continue;
                JoinVar jv;
                jv.name = v;
                jv.pos_left = position_of(query.patterns[it->second], v);
                jv.pos_right = position_of(query.patterns[c.index], v);
                step.join_vars.push_back(std::move(jv));
            }
            step.cartesian = step.join_vars.empty();
            for (const JoinVar& jv : step.join_vars)
                step.prov_left = sorted_union(step.prov_left, var_tables[jv.name]);

            if (pruned && !step.resolved.impossible) {
                // A subject-object join key bound in twin t can only recur on
                // the opposite position in the other twin, unless t's overlap
                // set is nonempty.
                for (const JoinVar& jv : step.join_vars) {
                    if (!jv.crossed()) continue;
                    std::vector<TableId> allowed;
                    for (TableId left : var_tables[jv.name]) {
                        allowed = sorted_union(allowed, {static_cast<TableId>(1 - left)});
                        if (!engine.rmtt->twin(static_cast<int>(left)).overlap.empty())
                            allowed = sorted_union(allowed, {left});
                    }
                    step.prov_right = sorted_intersection(step.prov_right, allowed);
                }
            }
            step.self_join = intersects(step.prov_left, step.prov_right);
        }

        for (const std::string& v : vars_of(c.index)) {
            var_tables[v] = step.prov_right;
            var_binder[v] = c.index;
        }
        result.steps.push_back(std::move(step));
    }
    return result;
}

namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<TermId>& key) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (TermId v : key) h = (h ^ v) * 0x100000001b3ull;
        return static_cast<std::size_t>(h ^ (h >> 32));
    }
};

struct BindingSet {
    std::vector<std::string> names;
    std::unordered_map<std::string, std::size_t> slot_of;
    // Row-major values and per-variable provenance tables, in parallel.
    std::vector<std::vector<TermId>> vals;
    std::vector<std::vector<TableId>> prov;

    std::size_t slot(const std::string& name) const { return slot_of.at(name); }
};

TermId component_at(const EncodedTriple& t, char pos) {
    return pos == 's' ? t.s : pos == 'p' ? t.p : t.o;
}

// Rows of a scan whose repeated variables disagree are dropped here; the
// index layer knows nothing about variable identity.
void filter_repeated_vars(const bgp::PatternAst& pattern, MatchResult& scan) {
    bool sp = pattern[0].is_var() && pattern[1].is_var() && pattern[0].var == pattern[1].var;
    bool so = pattern[0].is_var() && pattern[2].is_var() && pattern[0].var == pattern[2].var;
    bool po = pattern[1].is_var() && pattern[2].is_var() && pattern[1].var == pattern[2].var;
    if (!sp && !so && !po) return;
    std::size_t w = 0;
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        const EncodedTriple& t = scan.rows[i];
        if ((sp && t.s != t.p) || (so && t.s != t.o) || (po && t.p != t.o)) continue;
        scan.rows[w] = scan.rows[i];
        scan.row_tables[w] = scan.row_tables[i];
        ++w;
    }
    scan.rows.resize(w);
    scan.row_tables.resize(w);
}

MatchResult scan_step(const PlanStep& step, const EngineView& engine) {
    MatchResult scan;
    if (step.resolved.impossible) return scan;
    switch (engine.kind) {
        case EngineKind::Single:
            scan = engine.single->match(step.resolved.pattern);
            break;
        case EngineKind::Vp:
            scan = engine.vp->match(step.resolved.pattern);
            break;
        case EngineKind::RmttSound:
            scan = engine.rmtt->match(step.resolved.pattern, TwinRestrict::Both);
            break;
        case EngineKind::RmttPruned: {
            // Scan only the twins the plan kept for this step.
            bool t0 = std::find(step.prov_right.begin(), step.prov_right.end(), 0) !=
                      step.prov_right.end();
            bool t1 = std::find(step.prov_right.begin(), step.prov_right.end(), 1) !=
                      step.prov_right.end();
            if (t0 && t1)
                scan = engine.rmtt->match(step.resolved.pattern, TwinRestrict::Both);
            else if (t0)
                scan = engine.rmtt->match(step.resolved.pattern, TwinRestrict::Twin0);
            else if (t1)
                scan = engine.rmtt->match(step.resolved.pattern, TwinRestrict::Twin1);
            break;
        }
    }
    filter_repeated_vars(step.pattern, scan);
    return scan;
}

}  // namespace

ExecResult execute(const Plan& plan, const EngineView& engine) {
    auto start = std::chrono::steady_clock::now();
    ExecResult result;
    result.var_names = plan.projection;
    result.stats.plan_self_joins = plan.self_join_count();

    BindingSet rows;
    auto ensure_slot = [&rows](const std::string& name) {
        if (!rows.slot_of.contains(name)) {
            rows.slot_of.emplace(name, rows.names.size());
            rows.names.push_back(name);
        }
    };
    for (const PlanStep& step : plan.steps)
        for (const bgp::PatternTerm& t : step.pattern)
            if (t.is_var()) ensure_slot(t.var);
    const std::size_t n_slots = rows.names.size();

    bool dead = plan.definitely_empty;
    for (std::size_t si = 0; si < plan.steps.size() && !dead; ++si) {
        const PlanStep& step = plan.steps[si];
        MatchResult scan = scan_step(step, engine);

        auto bind_from_triple = [&](std::vector<TermId>& vals, std::vector<TableId>& prov,
                                    const EncodedTriple& t, TableId table) {
            const char positions[3] = {'s', 'p', 'o'};
            for (int i = 0; i < 3; ++i) {
                const bgp::PatternTerm& term = step.pattern[static_cast<std::size_t>(i)];
                if (!term.is_var()) continue;
                std::size_t slot = rows.slot(term.var);
                vals[slot] = component_at(t, positions[i]);
                prov[slot] = table;
            }
        };

        if (si == 0) {
            rows.vals.reserve(scan.rows.size());
            for (std::size_t i = 0; i < scan.rows.size(); ++i) {
                std::vector<TermId> vals(n_slots, kUnset);
                std::vector<TableId> prov(n_slots, 0);
                bind_from_triple(vals, prov, scan.rows[i], scan.row_tables[i]);
                rows.vals.push_back(std::move(vals));
                rows.prov.push_back(std::move(prov));
            }
            dead = rows.vals.empty();
            continue;
        }

        // The tag variable partitions the hashed side by physical table;
        // prefer a subject-object join variable so pruning and the
        // same-table metric look at the same key.
        std::size_t tag_var = 0;
        bool prune = false;
        for (std::size_t i = 0; i < step.join_vars.size(); ++i) {
            if (step.join_vars[i].crossed()) {
                tag_var = i;
                prune = engine.kind == EngineKind::RmttPruned;
                break;
            }
        }

        std::vector<std::vector<TermId>> next_vals;
        std::vector<std::vector<TableId>> next_prov;
        auto emit = [&](std::size_t left_index, std::size_t right_index) {
            std::vector<TermId> vals = rows.vals[left_index];
            std::vector<TableId> prov = rows.prov[left_index];
            bind_from_triple(vals, prov, scan.rows[right_index], scan.row_tables[right_index]);
            next_vals.push_back(std::move(vals));
            next_prov.push_back(std::move(prov));
        };

        if (step.cartesian) {
            result.stats.probe_count += std::max(rows.vals.size(), scan.rows.size());
            for (std::size_t l = 0; l < rows.vals.size(); ++l)
                for (std::size_t r = 0; r < scan.rows.size(); ++r) emit(l, r);
        } else {
            auto left_key = [&](std::size_t l, TableId tag) {
                std::vector<TermId> key{tag};
                for (const JoinVar& jv : step.join_vars)
                    key.push_back(rows.vals[l][rows.slot(jv.name)]);
                return key;
            };
            auto right_key = [&](std::size_t r, TableId tag) {
                std::vector<TermId> key{tag};
                for (const JoinVar& jv : step.join_vars)
                    key.push_back(component_at(scan.rows[r], jv.pos_right));
                return key;
            };
            auto left_tag = [&](std::size_t l) {
                return rows.prov[l][rows.slot(step.join_vars[tag_var].name)];
            };
            auto right_tag = [&](std::size_t r) { return scan.row_tables[r]; };
            auto same_twin_allowed = [&](TableId twin, const std::vector<TermId>& key) {
                return engine.rmtt->twin(static_cast<int>(twin))
                    .overlap.contains(key[1 + tag_var]);
            };

            // Side selection uses the unrestricted scan estimate so sound
            // and pruned mode make the same choice.
            bool hash_left = rows.vals.size() <= step.estimate;
            std::unordered_map<std::vector<TermId>, std::vector<std::uint32_t>, KeyHash> table;
            std::vector<TableId> tags;
            auto add_tag = [&tags](TableId t) {
                if (std::find(tags.begin(), tags.end(), t) == tags.end()) tags.push_back(t);
            };

            if (hash_left) {
                for (std::size_t l = 0; l < rows.vals.size(); ++l) {
                    table[left_key(l, left_tag(l))].push_back(static_cast<std::uint32_t>(l));
                    add_tag(left_tag(l));
                }
                std::sort(tags.begin(), tags.end());
                for (std::size_t r = 0; r < scan.rows.size(); ++r) {
                    for (TableId tag : tags) {
                        auto key = right_key(r, tag);
                        if (prune && tag == right_tag(r) && !same_twin_allowed(tag, key))
                            continue;
                        ++result.stats.probe_count;
                        if (tag == right_tag(r)) ++result.stats.runtime_same_table_probes;
                        auto it = table.find(key);
                        if (it == table.end()) continue;
                        for (std::uint32_t l : it->second) emit(l, r);
                    }
                }
            } else {
                for (std::size_t r = 0; r < scan.rows.size(); ++r) {
                    table[right_key(r, right_tag(r))].push_back(static_cast<std::uint32_t>(r));
                    add_tag(right_tag(r));
                }
                std::sort(tags.begin(), tags.end());
                for (std::size_t l = 0; l < rows.vals.size(); ++l) {
                    for (TableId tag : tags) {
                        auto key = left_key(l, tag);
                        if (prune && tag == left_tag(l) && !same_twin_allowed(tag, key))
                            continue;
                        ++result.stats.probe_count;
                        if (tag == left_tag(l)) ++result.stats.runtime_same_table_probes;
                        auto it = table.find(key);
                        if (it == table.end()) continue;
                        for (std::uint32_t r : it->second) emit(l, r);
                    }
                }
            }
        }

        rows.vals = std::move(next_vals);
        rows.prov = std::move(next_prov);
        dead = rows.vals.empty();
    }

    if (!plan.definitely_empty) {
        result.rows.reserve(rows.vals.size());
        for (const auto& vals : rows.vals) {
            std::vector<TermId> out;
            out.reserve(plan.projection.size());
            for (const std::string& v : plan.projection) out.push_back(vals[rows.slot(v)]);
            result.rows.push_back(std::move(out));
        }
    }
    result.stats.rows_out = result.rows.size();
    result.stats.wall_time = std::chrono::steady_clock::now() - start;
    return result;
}

std::string explain(const Plan& plan, const EngineView& engine) {
    std::ostringstream os;
    os << "engine: " << to_string(plan.engine) << "\n";
    if (plan.definitely_empty)
        os << "definitely empty: a constant term is absent from the dictionary\n";
    auto tables = [&](const std::vector<TableId>& ids) {
        std::string out = "{";
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (i) out += ",";
            out += engine.table_name(ids[i]);
        }
        return out + "}";
    };
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const PlanStep& step = plan.steps[i];
        os << "step " << i << ": ";
        if (i == 0) {
            os << "scan " << bgp::to_string(step.pattern) << " | est=" << step.estimate
               << " | tables=" << tables(step.prov_right) << "\n";
            continue;
        }
        os << "join " << bgp::to_string(step.pattern) << " | on ";
        if (step.cartesian) {
            os << "(cartesian)";
        } else {
            for (std::size_t j = 0; j < step.join_vars.size(); ++j) {
                const JoinVar& jv = step.join_vars[j];
                if (j) os << " ";
                os << "?" << jv.name << "[" << jv.pos_left << "-" << jv.pos_right << "]";
            }
        }
        os << " | est=" << step.estimate << " | left=" << tables(step.prov_left)
           << " right=" << tables(step.prov_right)
           << " | self-join=" << (step.self_join ? "yes" : "no") << "\n";
    }
    os << plan.self_join_count() << " self-joins\n";
    return os.str();
}

}  // namespace rmtt
