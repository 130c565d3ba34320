#include "memoria/synth/corpus.hpp"

#include "memoria/errors.hpp"
#include "memoria/io.hpp"
#include "memoria/kg/graph_io.hpp"
#include "memoria/llm/gateway.hpp"

#include <algorithm>
#include <cctype>
#include <future>
#include <map>
#include <set>

namespace memoria::synth {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<std::string_view, double>, 6> kTones = {{
    {"joyful", 0.8},
    {"warm", 0.6},
    {"proud", 0.7},
    {"nostalgic", 0.3},
    {"bittersweet", 0.0},
    {"sad", -0.5},
}};

constexpr std::array<std::string_view, 9> kConfusionNames = {
    "past_and_present", "misremembered_activity", "nonexistent_appointment",
    "current_date",     "wrong_location",         "repeated_question",
    "life_stage",       "vague_statement",        "environmental"};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::string person_id(const std::string& name) { return "person:" + slug(name); }

template <typename T, typename F>
T decode(const json& doc, const char* what, F&& f) {
    try {
        return f(doc);
    } catch (const json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

json occurrence_json(const kg::Occurrence& o) {
    if (const auto* d = std::get_if<std::chrono::year_month_day>(&o)) return format_date(*d);
    const auto& r = std::get<kg::YearRange>(o);
    return {{"from", r.from}, {"to", r.to}};
}

kg::Occurrence occurrence_from(const json& j) {
    kg::Occurrence out{kg::YearRange{}};
    if (j.is_string()) {
        out.emplace<std::chrono::year_month_day>(parse_date(j.get<std::string>()));
    } else {
        out.emplace<kg::YearRange>(kg::YearRange{j.at("from").get<int>(), j.at("to").get<int>()});
    }
    return out;
}

} // namespace

double tone_valence(std::string_view tone) noexcept {
    for (const auto& [name, v] : kTones) {
        if (name == tone) return v;
    }
    return 0.0;
}

std::string_view to_string(DialogueKind kind) noexcept { return kind == DialogueKind::clear ? "clear" : "confused"; }

DialogueKind parse_dialogue_kind(std::string_view text) {
    if (text == "clear") return DialogueKind::clear;
    if (text == "confused") return DialogueKind::confused;
    throw ParseError("unknown dialogue kind '" + std::string(text) + "'");
}

std::string_view to_string(ConfusionType type) noexcept { return kConfusionNames[static_cast<std::size_t>(type)]; }

ConfusionType parse_confusion_type(std::string_view text) {
    for (std::size_t i = 0; i < kConfusionNames.size(); ++i) {
        if (kConfusionNames[i] == text) return kConfusionTypes[i];
    }
    throw ParseError("unknown confusion type '" + std::string(text) + "'");
}

std::string slug(std::string_view text) {
    std::string out;
    bool dash = false;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c >= 0x80) {
            if (dash && !out.empty()) out.push_back('-');
            dash = false;
            out.push_back(static_cast<char>(std::tolower(c)));
        } else {
            dash = true;
        }
    }
    return out;
}

void validate(const PatientProfile& profile) {
    if (profile.id.empty() || profile.name.empty()) throw SchemaError("profile needs an id and a name");
    if (profile.family.empty()) throw SchemaError("profile " + profile.id + " lists no family member");
    if (profile.stage != "mild") throw SchemaError("profile " + profile.id + " stage must be mild");
}

std::size_t Corpus::dialogue_count() const {
    std::size_t n = 0;
    for (const auto& p : patients) n += p.draft.dialogues.size();
    return n;
}

const PatientRecord* Corpus::find(std::string_view patient_id) const {
    for (const auto& p : patients) {
        if (p.id() == patient_id) return &p;
    }
    return nullptr;
}

GraphPairResult build_graphs(const PatientProfile& profile, const std::vector<DailyLogEntry>& log,
                             const std::vector<InterviewSummary>& interviews) {
    std::map<std::string, kg::PersonNode> people;
    auto add_person = [&](const std::string& name, kg::PersonRole role, std::optional<std::string> relation) {
        kg::PersonNode node{person_id(name), name, role, std::move(relation), {}};
        if (role == kg::PersonRole::patient) node.demographics = {{"age", std::to_string(profile.age)},
                                                                  {"stage", profile.stage}};
        people.emplace(name, std::move(node));
    };
    add_person(profile.name, kg::PersonRole::patient, std::nullopt);
    for (const auto& f : profile.family) add_person(f.name, kg::PersonRole::family, f.relation);
    for (const auto& f : profile.friends) add_person(f, kg::PersonRole::friend_, "friend");
    for (const auto& c : profile.caregivers) add_person(c, kg::PersonRole::caregiver, std::nullopt);

    auto lookup = [&](const std::string& name, const std::string& where) -> const kg::PersonNode& {
        auto it = people.find(name);
        if (it == people.end()) {
            throw ValidationError(ValidationCode::unknown_person, "'" + name + "' in " + where + " is not in profile " +
                                                                      profile.id);
        }
        return it->second;
    };

    GraphPairResult out;
    out.daily.kind = kg::GraphKind::daily_routine;
    out.memory.kind = kg::GraphKind::life_memory;

    std::set<std::string> daily_people;
    for (const auto& entry : log) {
        kg::ActivityNode a;
        a.id = "activity:" + entry.slot.start.to_string().substr(0, 2) + entry.slot.start.to_string().substr(3, 2) +
               "-" + slug(entry.activity);
        a.name = entry.activity;
        a.slot = entry.slot;
        a.location = entry.location;
        a.description = entry.description;
        for (const auto& name : entry.participants) {
            const auto& person = lookup(name, "log entry " + entry.activity);
            daily_people.insert(name);
            const auto relation = person.role == kg::PersonRole::caregiver ? kg::Relation::supervises
                                                                          : kg::Relation::participates;
            out.daily.edges.push_back({person.id, a.id, relation});
        }
        out.daily.activities.push_back(std::move(a));
    }
    for (const auto& name : daily_people) out.daily.persons.push_back(people.at(name));

    std::set<std::string> memory_people;
    int n = 0;
    for (const auto& interview : interviews) {
        lookup(interview.interviewee.name, "interview");
        for (const auto& ev : interview.events) {
            kg::MemoryEventNode e;
            e.id = "event:" + std::to_string(++n) + "-" + slug(ev.title);
            e.title = ev.title;
            e.occurred = ev.period;
            e.description = ev.description;
            e.impact = {tone_valence(ev.tone), ev.tone + ", as told by " + interview.interviewee.name + " (" +
                                                   interview.interviewee.relation + ")"};
            for (const auto& name : ev.participants) {
                const auto& person = lookup(name, "event " + ev.title);
                memory_people.insert(name);
                out.memory.edges.push_back({person.id, e.id, kg::Relation::experienced});
            }
            out.memory.events.push_back(std::move(e));
        }
    }
    for (const auto& name : memory_people) out.memory.persons.push_back(people.at(name));

    out.daily = kg::canonical(std::move(out.daily));
    out.memory = kg::canonical(std::move(out.memory));
    kg::validate(out.daily);
    kg::validate(out.memory);
    return out;
}

void check_draft(const PatientDraft& d) {
    validate(d.profile);
    if (d.daily_log.empty()) throw SchemaError(d.profile.id + ": empty daily log");
    std::set<std::pair<int, int>> slots;
    for (const auto& e : d.daily_log) {
        if (!slots.insert({e.slot.start.minutes(), e.slot.end.minutes()}).second) {
            throw SchemaError(d.profile.id + ": duplicated slot " + e.slot.start.to_string());
        }
    }
    std::set<std::string> known{d.profile.name};
    for (const auto& f : d.profile.family) known.insert(f.name);
    known.insert(d.profile.friends.begin(), d.profile.friends.end());
    for (const auto& s : d.interviews) {
        for (const auto& ev : s.events) {
            if (std::none_of(ev.participants.begin(), ev.participants.end(),
                             [&](const std::string& p) { return known.contains(p); })) {
                throw SchemaError(d.profile.id + ": event '" + ev.title + "' names nobody from the profile");
            }
        }
    }
    if (d.dialogues.size() != kDialoguesPerPatient) {
        throw SchemaError(d.profile.id + ": expected " + std::to_string(kDialoguesPerPatient) + " dialogues");
    }
    const auto confused = std::count_if(d.dialogues.begin(), d.dialogues.end(),
                                        [](const DialogueItem& x) { return x.kind == DialogueKind::confused; });
    if (confused != kConfusedPerPatient) {
        throw SchemaError(d.profile.id + ": expected " + std::to_string(kConfusedPerPatient) + " confused dialogues");
    }
    for (const auto& x : d.dialogues) {
        if (x.text.empty() || x.reference.empty()) throw SchemaError(x.id + ": dialogue text and reference required");
        if ((x.kind == DialogueKind::confused) != x.confusion_type.has_value()) {
            throw SchemaError(x.id + ": confusion_type must be set exactly for confused dialogues");
        }
    }
}

std::uint64_t patient_seed(std::uint64_t corpus_seed, int index) noexcept {
    return splitmix64(corpus_seed ^ splitmix64(static_cast<std::uint64_t>(index) + 1));
}

ConfusionType confusion_type_for(std::uint64_t corpus_seed, int index, int j) noexcept {
    const std::uint64_t start = splitmix64(corpus_seed) % kConfusionTypes.size();
    return kConfusionTypes[(start + 2 * static_cast<std::uint64_t>(index) + static_cast<std::uint64_t>(j)) %
                           kConfusionTypes.size()];
}

PatientDraft GatewaySource::draft(int index, std::uint64_t seed, std::uint64_t corpus_seed) {
    json confusion = json::array();
    for (int j = 0; j < kConfusedPerPatient; ++j) {
        confusion.push_back(to_string(confusion_type_for(corpus_seed, index, j)));
    }
    char id[16];
    std::snprintf(id, sizeof id, "P%03d", index + 1);
    const json payload = {
        {"record", "patient"},
        {"patient_id", id},
        {"seed", seed},
        {"dialogues", kDialoguesPerPatient},
        {"confused_types", confusion},
        {"schema",
         {{"profile", "{id, name, age, stage:'mild', family:[{name, relation}], friends:[name], caregivers:[name]}"},
          {"daily_log", "[{slot:{start:'HH:MM', end:'HH:MM'}, activity, location, participants:[name], description}]"},
          {"interviews",
           "[{interviewee:{name, relation}, events:[{title, period:'YYYY-MM-DD'|{from,to}, description, tone, "
           "participants:[name]}]}]"},
          {"dialogues",
           "[{id, text, kind:'clear'|'confused', confusion_type?, reference, timestamp:'YYYY-MM-DDTHH:MM:SS', "
           "expected_terms:[string]}]"}}}};
    const llm::Validator check = [](const json& doc) {
        try {
            auto d = draft_from_json(doc);
            check_draft(d);
            build_graphs(d.profile, d.daily_log, d.interviews);
        } catch (const Error& e) {
            throw llm::OutputRejected(e.what());
        }
    };
    try {
        auto response = gateway_.call({llm::Task::synthesize, payload}, check);
        auto d = draft_from_json(response.document);
        d.profile.id = id;
        return d;
    } catch (const DecodeError& e) {
        throw SchemaError(std::string("patient ") + id + ": " + e.what());
    }
}

Corpus generate_corpus(int n_patients, std::uint64_t seed, ContentSource& source, int jobs) {
    if (n_patients < 1) throw PreconditionError("generate_corpus needs at least one patient");
    Corpus corpus;
    corpus.seed = seed;
    corpus.patients.resize(static_cast<std::size_t>(n_patients));
    auto make = [&](int i) {
        PatientRecord r;
        r.draft = source.draft(i, patient_seed(seed, i), seed);
        check_draft(r.draft);
        auto graphs = build_graphs(r.draft.profile, r.draft.daily_log, r.draft.interviews);
        r.daily = std::move(graphs.daily);
        r.memory = std::move(graphs.memory);
        corpus.patients[static_cast<std::size_t>(i)] = std::move(r);
    };
    if (jobs <= 1) {
        for (int i = 0; i < n_patients; ++i) make(i);
        return corpus;
    }
    for (int base = 0; base < n_patients; base += jobs) {
        std::vector<std::future<void>> batch;
        for (int i = base; i < std::min(n_patients, base + jobs); ++i) {
            batch.push_back(std::async(std::launch::async, make, i));
        }
        for (auto& f : batch) f.get();
    }
    return corpus;
}

Corpus generate_corpus(int n_patients, std::uint64_t seed, const llm::Gateway& gateway, int jobs) {
    if (gateway.backend().name() == "mock") {
        TemplateSource source;
        return generate_corpus(n_patients, seed, source, jobs);
    }
    GatewaySource source(gateway);
    return generate_corpus(n_patients, seed, source, jobs);
}

json manifest(const Corpus& corpus) {
    std::size_t clear = 0;
    std::map<std::string, int> types;
    json ids = json::array();
    for (const auto& p : corpus.patients) {
        ids.push_back(p.id());
        for (const auto& d : p.draft.dialogues) {
            if (d.kind == DialogueKind::clear) {
                ++clear;
            } else if (d.confusion_type) {
                ++types[std::string(to_string(*d.confusion_type))];
            }
        }
    }
    const auto total = corpus.dialogue_count();
    return {{"generator_version", corpus.generator_version},
            {"seed", corpus.seed},
            {"patients", corpus.patients.size()},
            {"patient_ids", std::move(ids)},
            {"dialogues", total},
            {"clear", clear},
            {"confused", total - clear},
            {"confusion_types", types}};
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& p : corpus.patients) {
        const auto pdir = dir / p.id();
        std::filesystem::create_directories(pdir);
        json log = json::array();
        for (const auto& e : p.draft.daily_log) log.push_back(to_json(e));
        json interviews = json::array();
        for (const auto& s : p.draft.interviews) interviews.push_back(to_json(s));
        std::string dialogues;
        for (const auto& d : p.draft.dialogues) dialogues += to_json(d).dump() + "\n";
        write_file_atomic(pdir / "profile.json", to_json(p.draft.profile).dump(2) + "\n");
        write_file_atomic(pdir / "daily_log.json", log.dump(2) + "\n");
        write_file_atomic(pdir / "interviews.json", interviews.dump(2) + "\n");
        write_file_atomic(pdir / "dialogues.jsonl", dialogues);
        kg::save_graph_file(p.daily, pdir / "routine_graph.json");
        kg::save_graph_file(p.memory, pdir / "memory_graph.json");
    }
    write_file_atomic(dir / "manifest.json", manifest(corpus).dump(2) + "\n");
}

Corpus load_corpus(const std::filesystem::path& dir) {
    json m;
    try {
        m = json::parse(read_file(dir / "manifest.json"));
    } catch (const json::exception& e) {
        throw ParseError("manifest.json: " + std::string(e.what()));
    }
    Corpus corpus;
    corpus.seed = m.value("seed", std::uint64_t{0});
    corpus.generator_version = m.value("generator_version", std::string(kGeneratorVersion));
    for (const auto& id : m.at("patient_ids")) {
        const auto pdir = dir / id.get<std::string>();
        PatientRecord r;
        auto parse = [&](const char* name) {
            try {
                return json::parse(read_file(pdir / name));
            } catch (const json::exception& e) {
                throw ParseError((pdir / name).string() + ": " + e.what());
            }
        };
        r.draft.profile = profile_from_json(parse("profile.json"));
        for (const auto& e : parse("daily_log.json")) r.draft.daily_log.push_back(log_entry_from_json(e));
        for (const auto& s : parse("interviews.json")) r.draft.interviews.push_back(interview_from_json(s));
        const auto lines = read_file(pdir / "dialogues.jsonl");
        std::size_t pos = 0;
        while (pos < lines.size()) {
            auto end = lines.find('\n', pos);
            if (end == std::string::npos) end = lines.size();
            const auto line = lines.substr(pos, end - pos);
            pos = end + 1;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            try {
                r.draft.dialogues.push_back(dialogue_from_json(json::parse(line)));
            } catch (const json::exception& e) {
                throw ParseError((pdir / "dialogues.jsonl").string() + ": " + e.what());
            }
        }
        r.daily = kg::load_graph_file(pdir / "routine_graph.json");
        r.memory = kg::load_graph_file(pdir / "memory_graph.json");
        corpus.patients.push_back(std::move(r));
    }
    return corpus;
}

json to_json(const PatientProfile& p) {
    json family = json::array();
    for (const auto& f : p.family) family.push_back({{"name", f.name}, {"relation", f.relation}});
    return {{"id", p.id},           {"name", p.name},       {"age", p.age},
            {"stage", p.stage},     {"family", family},     {"friends", p.friends},
            {"caregivers", p.caregivers}};
}

json to_json(const DailyLogEntry& e) {
    return {{"slot", {{"start", e.slot.start.to_string()}, {"end", e.slot.end.to_string()}}},
            {"activity", e.activity},
            {"location", e.location},
            {"participants", e.participants},
            {"description", e.description}};
}

json to_json(const InterviewSummary& s) {
    json events = json::array();
    for (const auto& ev : s.events) {
        events.push_back({{"title", ev.title},
                          {"period", occurrence_json(ev.period)},
                          {"description", ev.description},
                          {"tone", ev.tone},
                          {"participants", ev.participants}});
    }
    return {{"interviewee", {{"name", s.interviewee.name}, {"relation", s.interviewee.relation}}},
            {"events", std::move(events)}};
}

json to_json(const DialogueItem& d) {
    json out = {{"id", d.id},
                {"text", d.text},
                {"kind", to_string(d.kind)},
                {"reference", d.reference},
                {"timestamp", format_timestamp(d.timestamp)},
                {"expected_terms", d.expected_terms}};
    out["confusion_type"] = d.confusion_type ? json(to_string(*d.confusion_type)) : json();
    return out;
}

json to_json(const PatientDraft& d) {
    json log = json::array();
    for (const auto& e : d.daily_log) log.push_back(to_json(e));
    json interviews = json::array();
    for (const auto& s : d.interviews) interviews.push_back(to_json(s));
    json dialogues = json::array();
    for (const auto& x : d.dialogues) dialogues.push_back(to_json(x));
    return {{"profile", to_json(d.profile)}, {"daily_log", log}, {"interviews", interviews}, {"dialogues", dialogues}};
}

PatientProfile profile_from_json(const json& doc) {
    return decode<PatientProfile>(doc, "profile", [](const json& j) {
        PatientProfile p;
        p.id = j.at("id").get<std::string>();
        p.name = j.at("name").get<std::string>();
        p.age = j.at("age").get<int>();
        p.stage = j.value("stage", std::string("mild"));
        for (const auto& f : j.at("family")) p.family.push_back({f.at("name"), f.at("relation")});
        p.friends = j.value("friends", std::vector<std::string>{});
        p.caregivers = j.value("caregivers", std::vector<std::string>{});
        return p;
    });
}

DailyLogEntry log_entry_from_json(const json& doc) {
    return decode<DailyLogEntry>(doc, "daily log entry", [](const json& j) {
        DailyLogEntry e;
        e.slot = {TimeOfDay::parse(j.at("slot").at("start").get<std::string>()),
                  TimeOfDay::parse(j.at("slot").at("end").get<std::string>())};
        e.activity = j.at("activity").get<std::string>();
        e.location = j.at("location").get<std::string>();
        e.participants = j.value("participants", std::vector<std::string>{});
        e.description = j.value("description", std::string{});
        return e;
    });
}

InterviewSummary interview_from_json(const json& doc) {
    return decode<InterviewSummary>(doc, "interview", [](const json& j) {
        InterviewSummary s;
        s.interviewee = {j.at("interviewee").at("name"), j.at("interviewee").at("relation")};
        for (const auto& ev : j.at("events")) {
            s.events.push_back({ev.at("title").get<std::string>(), occurrence_from(ev.at("period")),
                                ev.at("description").get<std::string>(), ev.value("tone", std::string{}),
                                ev.value("participants", std::vector<std::string>{})});
        }
        return s;
    });
}

DialogueItem dialogue_from_json(const json& doc) {
    return decode<DialogueItem>(doc, "dialogue", [](const json& j) {
        DialogueItem d;
        d.id = j.at("id").get<std::string>();
        d.text = j.at("text").get<std::string>();
        d.kind = parse_dialogue_kind(j.at("kind").get<std::string>());
        if (auto it = j.find("confusion_type"); it != j.end() && !it->is_null()) {
            d.confusion_type = parse_confusion_type(it->get<std::string>());
        }
        d.reference = j.value("reference", std::string{});
        d.timestamp = parse_timestamp(j.at("timestamp").get<std::string>());
        d.expected_terms = j.value("expected_terms", std::vector<std::string>{});
        return d;
    });
}

PatientDraft draft_from_json(const json& doc) {
    return decode<PatientDraft>(doc, "patient draft", [](const json& j) {
        PatientDraft d;
        d.profile = profile_from_json(j.at("profile"));
        for (const auto& e : j.at("daily_log")) d.daily_log.push_back(log_entry_from_json(e));
        for (const auto& s : j.at("interviews")) d.interviews.push_back(interview_from_json(s));
        for (const auto& x : j.at("dialogues")) d.dialogues.push_back(dialogue_from_json(x));
        return d;
    });
}

} // namespace memoria::synth
