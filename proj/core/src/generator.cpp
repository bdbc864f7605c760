#include "rmtt/generator.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "rmtt/ntriples.hpp"

namespace rmtt::gen {

namespace {

constexpr const char* kUb = "http://www.lehigh.edu/~zhp2/2004/0401/univ-bench.owl#";
constexpr const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

// splitmix64: stable across platforms, unlike the std distributions.
struct Rng {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

struct Entity {
    std::string iri;
    std::string local;  // the part after the last '/'
};

struct Department {
    std::uint32_t univ;
    std::string host;  // www.DepartmentD.UniversityU.edu
    std::string iri;
    std::vector<Entity> professors;
    std::vector<Entity> grads;
    std::vector<Entity> undergrads;
    std::vector<Entity> courses;       // regular first, then graduate
    std::size_t regular_courses = 0;   // index of the first graduate course
    std::vector<Entity> groups;
};

struct World {
    std::vector<std::string> universities;
    std::vector<Department> departments;
};

constexpr std::uint32_t kGroupsPerDepartment = 3;

World make_world(const GenConfig& cfg) {
    World world;
    for (std::uint32_t u = 0; u < cfg.universities; ++u)
        world.universities.push_back("http://www.University" + std::to_string(u) + ".edu");
    for (std::uint32_t u = 0; u < cfg.universities; ++u) {
        for (std::uint32_t d = 0; d < cfg.departments_per_university; ++d) {
            Department dept;
            dept.univ = u;
            dept.host = "www.Department" + std::to_string(d) + ".University" + std::to_string(u) +
                        ".edu";
            dept.iri = "http://" + dept.host;
            auto member = [&dept](const std::string& local) {
                return Entity{dept.iri + "/" + local, local};
            };
            for (std::uint32_t i = 0; i < cfg.professors_per_department; ++i) {
                static const char* ranks[3] = {"FullProfessor", "AssociateProfessor",
                                               "AssistantProfessor"};
                dept.professors.push_back(
                    member(std::string(ranks[i % 3]) + std::to_string(i / 3)));
            }
            std::uint32_t grads = cfg.students_per_department / 3;
            for (std::uint32_t i = 0; i < grads; ++i)
                dept.grads.push_back(member("GraduateStudent" + std::to_string(i)));
            for (std::uint32_t i = 0; i < cfg.students_per_department - grads; ++i)
                dept.undergrads.push_back(member("UndergraduateStudent" + std::to_string(i)));
            std::uint32_t grad_courses = cfg.courses_per_department / 2;
            dept.regular_courses = cfg.courses_per_department - grad_courses;
            for (std::uint32_t i = 0; i < dept.regular_courses; ++i)
                dept.courses.push_back(member("Course" + std::to_string(i)));
            for (std::uint32_t i = 0; i < grad_courses; ++i)
                dept.courses.push_back(member("GraduateCourse" + std::to_string(i)));
            for (std::uint32_t i = 0; i < kGroupsPerDepartment; ++i)
                dept.groups.push_back(member("ResearchGroup" + std::to_string(i)));
            world.departments.push_back(std::move(dept));
        }
    }
    return world;
}

class Emitter {
  public:
    explicit Emitter(std::vector<Triple>& out) : out_(out) {}

    void triple(const std::string& s, const std::string& p, const std::string& o) {
        out_.push_back({iri(s), iri(p), iri(o)});
    }
    void lit(const std::string& s, const std::string& p, const std::string& o) {
        out_.push_back({iri(s), iri(p), literal(o)});
    }
    void type(const std::string& s, const std::string& cls) {
        triple(s, kRdfType, std::string(kUb) + cls);
    }
    void ub(const std::string& s, const std::string& pred, const std::string& o) {
        triple(s, std::string(kUb) + pred, o);
    }
    void ub_lit(const std::string& s, const std::string& pred, const std::string& o) {
        out_.push_back({iri(s), iri(std::string(kUb) + pred), literal(o)});
    }

  private:
    std::vector<Triple>& out_;
};

std::string phone(Rng& rng) {
    auto digits = [&rng](int n) {
        std::string s;
        for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng.below(10)));
        return s;
    };
    return "555-" + digits(3) + "-" + digits(4);
}

}  // namespace

void GenConfig::validate() const {
    if (universities < 1 || departments_per_university < 1)
        throw std::invalid_argument("gen: need at least one university and department");
    if (students_per_department < 6)
        throw std::invalid_argument("gen: students_per_department must be >= 6");
    if (professors_per_department < 3)
        throw std::invalid_argument("gen: professors_per_department must be >= 3");
    if (courses_per_department < 5)
        throw std::invalid_argument("gen: courses_per_department must be >= 5");
}

std::vector<Triple> generate(const GenConfig& cfg) {
    cfg.validate();
    World world = make_world(cfg);
    std::vector<Triple> triples;
    Emitter emit(triples);
    Rng rng{cfg.seed * 0x2545f4914f6cdd1dull + 1};

    const std::size_t P = cfg.professors_per_department;
    const std::size_t C = cfg.courses_per_department;

    // Class assertions and organization edges. subOrganizationOf edges come
    // before the department/group class rows so each block of rows stays on
    // one side of the twin partition.
    for (const auto& u : world.universities) emit.type(u, "University");
    for (const auto& dept : world.departments)
        emit.ub(dept.iri, "subOrganizationOf", world.universities[dept.univ]);
    for (const auto& dept : world.departments)
        for (const auto& rg : dept.groups)
            emit.ub(rg.iri, "subOrganizationOf", world.universities[dept.univ]);
    for (const auto& dept : world.departments)
        for (const auto& rg : dept.groups) emit.type(rg.iri, "ResearchGroup");
    for (const auto& dept : world.departments) emit.type(dept.iri, "Department");
    for (const auto& dept : world.departments)
        for (const auto& c : dept.courses) emit.type(c.iri, "Course");
    for (const auto& dept : world.departments) {
        for (std::size_t i = 0; i < dept.professors.size(); ++i) {
            const auto& p = dept.professors[i];
            emit.type(p.iri, "Professor");
            emit.type(p.iri, "Faculty");
            emit.type(p.iri, "Person");
            if (i == 0) emit.type(p.iri, "Chair");
        }
    }
    for (const auto& dept : world.departments) {
        for (const auto& s : dept.grads) {
            emit.type(s.iri, "GraduateStudent");
            emit.type(s.iri, "Student");
            emit.type(s.iri, "Person");
        }
        for (const auto& s : dept.undergrads) {
            emit.type(s.iri, "UndergraduateStudent");
            emit.type(s.iri, "Student");
            emit.type(s.iri, "Person");
        }
    }

    // Membership and person attributes.
    for (const auto& dept : world.departments)
        for (const auto& p : dept.professors) emit.ub(p.iri, "worksFor", dept.iri);
    for (const auto& dept : world.departments) {
        for (const auto& s : dept.grads) emit.ub(s.iri, "memberOf", dept.iri);
        for (const auto& s : dept.undergrads) emit.ub(s.iri, "memberOf", dept.iri);
    }
    auto each_person = [&world](auto&& f) {
        for (const auto& dept : world.departments) {
            for (const auto& p : dept.professors) f(dept, p);
            for (const auto& s : dept.grads) f(dept, s);
            for (const auto& s : dept.undergrads) f(dept, s);
        }
    };
    each_person([&](const Department&, const Entity& e) { emit.ub_lit(e.iri, "name", e.local); });
    each_person([&](const Department& dept, const Entity& e) {
        emit.ub_lit(e.iri, "emailAddress", e.local + "@" + dept.host);
    });
    each_person(
        [&](const Department&, const Entity& e) { emit.ub_lit(e.iri, "telephone", phone(rng)); });

    // Enrollment. GraduateStudent0 always takes GraduateCourse0,
    // UndergraduateStudent0 always takes Course2 (taught by
    // AssociateProfessor0), and GraduateStudent1 takes Course0, which its
    // forced advisor FullProfessor0 teaches.
    for (const auto& dept : world.departments) {
        auto enroll = [&](const Entity& s, std::size_t forced) {
            std::set<std::size_t> picks;
            if (forced != C) picks.insert(forced);
            std::size_t n = 1 + rng.below(3);
            while (picks.size() < n) picks.insert(rng.below(C));
            for (std::size_t c : picks) emit.ub(s.iri, "takesCourse", dept.courses[c].iri);
        };
        for (std::size_t i = 0; i < dept.grads.size(); ++i)
            enroll(dept.grads[i], i == 0 ? dept.regular_courses : (i == 1 ? 0 : C));
        for (std::size_t i = 0; i < dept.undergrads.size(); ++i)
            enroll(dept.undergrads[i], i == 0 ? 2 : C);
    }
    for (const auto& dept : world.departments)
        for (std::size_t i = 0; i < dept.professors.size(); ++i) {
            emit.ub(dept.professors[i].iri, "teacherOf", dept.courses[(2 * i) % C].iri);
            emit.ub(dept.professors[i].iri, "teacherOf", dept.courses[(2 * i + 1) % C].iri);
        }

    // Degree links. GraduateStudent0 of Department0.University0 is an
    // alumnus of University0 so the fixed-IRI queries have answers.
    for (const auto& dept : world.departments) {
        for (std::size_t i = 0; i < dept.grads.size(); ++i) {
            std::size_t target = dept.univ;
            bool forced = &dept == &world.departments.front() && i == 0;
            if (!forced && rng.below(5) != 0) target = rng.below(world.universities.size());
            emit.ub(dept.grads[i].iri, "undergraduateDegreeFrom", world.universities[target]);
        }
    }

    // Publications, then the person-referencing edges (publicationAuthor,
    // advisor, hasAlumnus). These edges point at terms that are already
    // subjects on both sides, so they are where partition fallbacks happen.
    std::vector<std::pair<std::string, std::string>> authorship;  // publication, professor
    for (const auto& dept : world.departments)
        for (const auto& p : dept.professors) {
            std::size_t n = 1 + rng.below(3);
            for (std::size_t j = 0; j < n; ++j)
                authorship.emplace_back(p.iri + "/Publication" + std::to_string(j), p.iri);
        }
    for (const auto& [pub, author] : authorship) emit.type(pub, "Publication");
    for (const auto& [pub, author] : authorship) emit.ub(pub, "publicationAuthor", author);

    for (const auto& dept : world.departments) {
        for (std::size_t i = 0; i < dept.grads.size(); ++i) {
            std::size_t advisor = i == 1 ? 0 : rng.below(P);
            emit.ub(dept.grads[i].iri, "advisor", dept.professors[advisor].iri);
        }
        for (const auto& s : dept.undergrads)
            if (rng.below(5) == 0) emit.ub(s.iri, "advisor", dept.professors[rng.below(P)].iri);
    }

    for (std::size_t u = 0; u < world.universities.size(); ++u) {
        std::set<std::string> picked;
        if (u == 0) picked.insert(world.departments.front().grads.front().iri);
        while (picked.size() < 3) {
            const Department& dept = world.departments[rng.below(world.departments.size())];
            bool grad = rng.below(2) == 0;
            const auto& pool = grad ? dept.grads : dept.undergrads;
            picked.insert(pool[rng.below(pool.size())].iri);
        }
        for (const auto& s : picked) emit.ub(world.universities[u], "hasAlumnus", s);
    }

    return triples;
}

void generate_to(std::ostream& out, const GenConfig& cfg) {
    for (const Triple& t : generate(cfg)) out << nt::serialize(t) << "\n";
}

std::size_t generate_file(const std::string& path, const GenConfig& cfg) {
    std::vector<Triple> triples = generate(cfg);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const Triple& t : triples) out << nt::serialize(t) << "\n";
    if (!out) throw std::runtime_error("I/O error writing " + path);
    return triples.size();
}

}  // namespace rmtt::gen
