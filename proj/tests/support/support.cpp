#include "support.hpp"

#include "memoria/kg/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#ifndef MEMORIA_SAMPLE_DIR
#error "MEMORIA_SAMPLE_DIR must be defined"
#endif
#ifndef MEMORIA_FIXTURES_DIR
#error "MEMORIA_FIXTURES_DIR must be defined"
#endif

namespace memoria::testing {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& word_pool() {
    static const std::vector<std::string> words = {
        "tom",     "sarah",  "anna",    "kitchen", "garden", "lunch",  "breakfast", "walk",    "music",
        "piano",   "lake",   "fishing", "church",  "choir",  "dance",  "wedding",   "doctor",  "nurse",
        "bedroom", "lounge", "tea",     "cake",    "roses",  "summer", "morning",   "evening", "visit",
        "letter",  "photo",  "bus",     "market",  "school", "bread",  "radio",     "dog",     "sea",
        "train",   "garage", "coat",    "hat"};
    return words;
}

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

const std::string& pick(Rng& rng, const std::vector<std::string>& v) {
    return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1))];
}

std::string capitalized(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

std::vector<kg::PersonNode> random_persons(Rng& rng, int n) {
    static const std::vector<std::string> relations = {"daughter", "son", "brother", "friend", "neighbour"};
    std::vector<kg::PersonNode> persons;
    for (int i = 0; i < n; ++i) {
        kg::PersonNode p;
        p.id = "person:p" + std::to_string(i);
        p.name = capitalized(pick(rng, word_pool())) + " " + capitalized(pick(rng, word_pool()));
        if (i == 0) {
            p.role = kg::PersonRole::patient;
            p.demographics = {{"age", std::to_string(uniform(rng, 65, 99))}, {"stage", "mild"}};
        } else {
            static const kg::PersonRole roles[] = {kg::PersonRole::family, kg::PersonRole::friend_,
                                                   kg::PersonRole::caregiver};
            p.role = roles[uniform(rng, 0, 2)];
            if (p.role != kg::PersonRole::caregiver && uniform(rng, 0, 1) == 1) {
                p.relation_to_patient = pick(rng, relations);
            }
        }
        persons.push_back(std::move(p));
    }
    return persons;
}

TimeSlot random_slot(Rng& rng) {
    const int start = uniform(rng, 0, TimeOfDay::kMinutesPerDay - 1);
    const int end = uniform(rng, start + 1, TimeOfDay::kMinutesPerDay);
    return {TimeOfDay(start), TimeOfDay(end)};
}

} // namespace

std::string random_words(Rng& rng, int min_words, int max_words) {
    std::string out;
    const int n = uniform(rng, min_words, max_words);
    for (int i = 0; i < n; ++i) out += (i ? " " : "") + pick(rng, word_pool());
    return out;
}

kg::KnowledgeGraph random_daily_graph(Rng& rng, int persons, int activities) {
    kg::KnowledgeGraph g;
    g.kind = kg::GraphKind::daily_routine;
    g.persons = random_persons(rng, persons);
    for (int i = 0; i < activities; ++i) {
        kg::ActivityNode a;
        a.id = "activity:a" + std::to_string(i);
        a.name = capitalized(random_words(rng, 1, 2));
        a.slot = random_slot(rng);
        a.location = pick(rng, word_pool());
        a.description = random_words(rng, 2, 8);
        g.activities.push_back(std::move(a));
    }
    std::set<std::pair<std::string, std::string>> seen;
    if (persons > 0 && activities > 0) {
        const int edges = uniform(rng, 0, persons * 2);
        for (int i = 0; i < edges; ++i) {
            const auto& p = g.persons[static_cast<std::size_t>(uniform(rng, 0, persons - 1))];
            const auto& a = g.activities[static_cast<std::size_t>(uniform(rng, 0, activities - 1))];
            if (!seen.emplace(p.id, a.id).second) continue;
            g.edges.push_back({p.id, a.id,
                               p.role == kg::PersonRole::caregiver ? kg::Relation::supervises
                                                                   : kg::Relation::participates});
        }
    }
    return g;
}

kg::KnowledgeGraph random_memory_graph(Rng& rng, int persons, int events) {
    kg::KnowledgeGraph g;
    g.kind = kg::GraphKind::life_memory;
    g.persons = random_persons(rng, persons);
    for (int i = 0; i < events; ++i) {
        kg::MemoryEventNode e;
        e.id = "event:e" + std::to_string(i);
        e.title = capitalized(random_words(rng, 1, 3));
        if (uniform(rng, 0, 1) == 0) {
            using namespace std::chrono;
            e.occurred = year_month_day{year{uniform(rng, 1930, 2020)}, month{static_cast<unsigned>(uniform(rng, 1, 12))},
                                        day{static_cast<unsigned>(uniform(rng, 1, 28))}};
        } else {
            const int from = uniform(rng, 1930, 2020);
            e.occurred = kg::YearRange{from, from + uniform(rng, 0, 10)};
        }
        e.description = random_words(rng, 3, 10);
        e.impact.valence = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        e.impact.assessment = random_words(rng, 1, 3);
        g.events.push_back(std::move(e));
    }
    std::set<std::pair<std::string, std::string>> seen;
    if (persons > 0 && events > 0) {
        const int edges = uniform(rng, 0, persons * 2);
        for (int i = 0; i < edges; ++i) {
            const auto& p = g.persons[static_cast<std::size_t>(uniform(rng, 0, persons - 1))];
            const auto& e = g.events[static_cast<std::size_t>(uniform(rng, 0, events - 1))];
            if (seen.emplace(p.id, e.id).second) g.edges.push_back({p.id, e.id, kg::Relation::experienced});
        }
    }
    return g;
}

kg::KnowledgeGraph random_schedule(Rng& rng, int activities) {
    kg::KnowledgeGraph g;
    g.kind = kg::GraphKind::daily_routine;
    for (int i = 0; i < activities; ++i) {
        kg::ActivityNode a;
        // ids are not in start order so the tie-break is exercised
        a.id = "activity:" + std::to_string(uniform(rng, 0, 999)) + "-" + std::to_string(i);
        a.name = "slot " + std::to_string(i);
        a.location = "room";
        a.description = "scheduled";
        if (uniform(rng, 0, 3) == 0 && i > 0) {
            // same start as an earlier slot, different end
            const auto& prev = g.activities[static_cast<std::size_t>(uniform(rng, 0, i - 1))];
            a.slot.start = prev.slot.start;
            a.slot.end = TimeOfDay(uniform(rng, prev.slot.start.minutes() + 1, TimeOfDay::kMinutesPerDay));
        } else {
            a.slot = random_slot(rng);
        }
        g.activities.push_back(std::move(a));
    }
    return g;
}

std::optional<std::string> brute_force_current(const kg::KnowledgeGraph& graph, TimeOfDay t) {
    const kg::ActivityNode* best = nullptr;
    for (const auto& a : graph.activities) {
        const bool contains = a.slot.start.minutes() <= t.minutes() && t.minutes() < a.slot.end.minutes();
        if (!contains) continue;
        if (best == nullptr || a.slot.start.minutes() > best->slot.start.minutes() ||
            (a.slot.start.minutes() == best->slot.start.minutes() && a.id < best->id)) {
            best = &a;
        }
    }
    if (best == nullptr) return std::nullopt;
    return best->id;
}

std::vector<std::string> oracle_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (cur.size() >= 2) out.push_back(cur);
        cur.clear();
    };
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

double brute_force_rouge(const std::string& candidate, const std::string& reference, int n) {
    const auto c = oracle_tokens(candidate);
    const auto r = oracle_tokens(reference);
    if (c.empty()) return 0.0;
    auto grams = [n](const std::vector<std::string>& t) {
        std::vector<std::string> out;
        for (int i = 0; i + n <= static_cast<int>(t.size()); ++i) {
            std::string g;
            for (int k = 0; k < n; ++k) g += t[static_cast<std::size_t>(i + k)] + "\x1f";
            out.push_back(g);
        }
        return out;
    };
    const auto cg = grams(c);
    const auto rg = grams(r);
    if (rg.empty()) return c == r ? 1.0 : 0.0;
    if (cg.empty()) return 0.0;
    // clipped overlap: each distinct candidate gram counts min(count in c, count in r)
    int overlap = 0;
    for (std::size_t i = 0; i < cg.size(); ++i) {
        bool first = true;
        for (std::size_t j = 0; j < i; ++j) {
            if (cg[j] == cg[i]) first = false;
        }
        if (!first) continue;
        int in_c = 0;
        int in_r = 0;
        for (const auto& g : cg) in_c += g == cg[i] ? 1 : 0;
        for (const auto& g : rg) in_r += g == cg[i] ? 1 : 0;
        overlap += std::min(in_c, in_r);
    }
    if (overlap == 0) return 0.0;
    const double p = static_cast<double>(overlap) / static_cast<double>(cg.size());
    const double rec = static_cast<double>(overlap) / static_cast<double>(rg.size());
    return 2.0 * p * rec / (p + rec);
}

double brute_force_relevance(const std::vector<std::string>& tokens, const std::vector<std::string>& keywords) {
    int hits = 0;
    for (const auto& k : keywords) {
        if (std::find(tokens.begin(), tokens.end(), k) != tokens.end()) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(keywords.size());
}

query::DialogueTurn turn(const std::string& text, const std::string& timestamp) {
    return {text, parse_timestamp(timestamp)};
}

std::shared_ptr<llm::Gateway> mock_gateway(llm::MockScript script) {
    return std::make_shared<llm::Gateway>(std::make_shared<llm::MockBackend>(std::move(script)));
}

std::shared_ptr<llm::Gateway> scripted_eta_gateway(std::vector<double> etas, llm::WeightRule rule) {
    auto script = llm::MockScript::standard();
    script.efficiency_script = std::move(etas);
    script.weight_rule = rule;
    return mock_gateway(std::move(script));
}

std::string ScriptedBackend::complete(const llm::GatewayRequest& request, const llm::Prompt& prompt) {
    Handler handler;
    {
        std::lock_guard lock(mutex_);
        ++calls_[request.task];
        if (auto it = handlers_.find(request.task); it != handlers_.end()) handler = it->second;
    }
    if (handler) return handler(request);
    return fallback_.complete(request, prompt);
}

int ScriptedBackend::calls(llm::Task task) const {
    std::lock_guard lock(mutex_);
    auto it = calls_.find(task);
    return it == calls_.end() ? 0 : it->second;
}

int ScriptedBackend::total_calls() const {
    std::lock_guard lock(mutex_);
    int n = 0;
    for (const auto& [task, count] : calls_) n += count;
    return n;
}

fs::path sample_dir() { return MEMORIA_SAMPLE_DIR; }
fs::path fixtures_dir() { return MEMORIA_FIXTURES_DIR; }

TempDir::TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("memoria-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

namespace {

json base_daily(std::uint64_t seed) {
    Rng rng(seed);
    auto g = random_daily_graph(rng, 4, 4);
    g.edges.push_back({"person:p0", "activity:a0", kg::Relation::participates});
    return kg::graph_to_json(kg::canonical(g));
}

json base_memory(std::uint64_t seed) {
    Rng rng(seed);
    auto g = random_memory_graph(rng, 4, 4);
    g.edges.push_back({"person:p0", "event:e0", kg::Relation::experienced});
    return kg::graph_to_json(kg::canonical(g));
}

json& node(json& doc, const char* list, const std::string& id) {
    for (auto& n : doc[list]) {
        if (n.at("id") == id) return n;
    }
    throw std::logic_error("fixture node missing: " + id);
}

} // namespace

std::vector<InvalidCase> invalid_graph_cases() {
    using VC = ValidationCode;
    std::vector<InvalidCase> cases;
    auto add = [&](std::string name, const json& doc, VC code) { cases.push_back({std::move(name), doc.dump(), code}); };

    for (std::uint64_t s = 1; s <= 5; ++s) {
        const auto sfx = "_" + std::to_string(s);
        const json daily = base_daily(s);
        const json memory = base_memory(s);

        {
            json d = daily;
            d["persons"].push_back(d["persons"][1]);
            add("duplicate_person" + sfx, d, VC::duplicate_id);
        }
        {
            json d = daily;
            d["persons"][1]["role"] = "patient";
            add("second_patient" + sfx, d, VC::multiple_patients);
        }
        {
            json d = daily;
            d["edges"].push_back({{"source", "person:p0"}, {"target", "activity:missing"}, {"relation", "participates"}});
            add("dangling_target" + sfx, d, VC::dangling_edge);
        }
        {
            json d = daily;
            d["edges"].push_back({{"source", "person:p1"}, {"target", "activity:a1"}, {"relation", "experienced"}});
            add("experienced_in_daily" + sfx, d, VC::illegal_relation);
        }
        {
            json d = daily;
            d["events"].push_back(memory["events"][0]);
            add("event_in_daily" + sfx, d, VC::node_kind_mismatch);
        }
        {
            json m = memory;
            node(m, "events", "event:e1")["description"] = s % 2 ? "" : "   ";
            add("blank_event_description" + sfx, m, VC::empty_description);
        }
        {
            json m = memory;
            node(m, "events", "event:e2")["impact"]["valence"] = s % 2 ? 1.5 : -1.25;
            add("valence_outside_unit" + sfx, m, VC::valence_out_of_range);
        }
        {
            json d = daily;
            auto& a = node(d, "activities", "activity:a2");
            a["slot"] = s % 2 ? json{{"start", "10:00"}, {"end", "10:00"}} : json{{"start", "15:00"}, {"end", "09:00"}};
            add("backward_slot" + sfx, d, VC::invalid_slot);
        }
        {
            json d = daily;
            node(d, "activities", "activity:a3")["location"] = s % 2 ? "" : " \t";
            add("blank_location" + sfx, d, VC::empty_location);
        }
        // one rotating case per seed covers the remaining invariants
        json m = memory;
        switch (s) {
        case 1:
            node(m, "events", "event:e3")["occurred"] = "2023-02-30";
            add("impossible_date" + sfx, m, VC::invalid_date);
            break;
        case 2:
            node(m, "events", "event:e0")["occurred"] = {{"from", 1990}, {"to", 1980}};
            add("year_range_backwards" + sfx, m, VC::invalid_year_range);
            break;
        case 3: {
            auto e = m["events"][0];
            e["id"] = m["persons"][2]["id"];
            m["events"].push_back(e);
            add("event_reuses_person_id" + sfx, m, VC::duplicate_id);
            break;
        }
        case 4:
            m["edges"].push_back({{"source", "person:ghost"}, {"target", "event:e0"}, {"relation", "experienced"}});
            add("dangling_source" + sfx, m, VC::dangling_edge);
            break;
        default:
            m["edges"].push_back({{"source", "person:p1"}, {"target", "event:e1"}, {"relation", "participates"}});
            add("participates_in_memory" + sfx, m, VC::illegal_relation);
            break;
        }
    }
    return cases;
}

} // namespace memoria::testing
