#include "memoria/synth/corpus.hpp"
#include "memoria/vocabulary.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <random>

namespace memoria::synth {

namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::year;
using std::chrono::year_month_day;

class Picker {
public:
    explicit Picker(std::uint64_t seed) : rng_(seed) {}

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
    int between(int lo, int hi) { return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo + 1))); }

    template <typename Range>
    std::string one(const Range& r) {
        return std::string(r[index(std::size(r))]);
    }

    /// k distinct elements, in draw order.
    template <typename Range>
    std::vector<std::string> distinct(const Range& r, std::size_t k) {
        std::vector<std::string> pool(std::begin(r), std::end(r));
        for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + index(pool.size() - i)]);
        pool.resize(k);
        return pool;
    }

private:
    std::mt19937_64 rng_;
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string first_name(const std::string& full) { return full.substr(0, full.find(' ')); }

std::string capitalized(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

void replace_all(std::string& s, std::string_view key, const std::string& value) {
    for (auto pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + value.size())) {
        s.replace(pos, key.size(), value);
    }
}

struct Variant {
    const char* name;
    const char* location;
    const char* description;
};

constexpr Variant kExercise[] = {
    {"Morning walk", "garden", "A gentle walk along the garden paths, stopping to look at the flowers."},
    {"Chair exercises", "lounge", "Stretching and chair exercises to music."},
};

constexpr Variant kClub[] = {
    {"Gardening club", "greenhouse", "Potting plants and watering seedlings with the gardening group."},
    {"Music session", "lounge", "Singing old songs together around the piano."},
    {"Art class", "activity room", "Painting with watercolours at the big table."},
    {"Reading group", "library", "Reading the newspaper and short stories aloud."},
};

// What a resident who mixes up the club might want to fetch for it.
constexpr const char* kClubItem[] = {"gloves", "songbook", "apron", "glasses"};

constexpr Variant kAfternoon[] = {
    {"Bingo", "lounge", "Bingo with the other residents."},
    {"Card games", "lounge", "Playing cards and dominoes at the window table."},
    {"Puzzle time", "activity room", "Working on a jigsaw puzzle together."},
    {"Garden stroll", "garden", "A short stroll around the garden before dinner."},
};

enum class Shift { morning, afternoon, night };

struct SlotTemplate {
    const char* start;
    const char* end;
    const Variant* variants;
    std::size_t variant_count;
    Shift shift;
    bool family = false;
};

constexpr Variant kNightSleep[] = {{"Night sleep", "bedroom", "Sleeping in the bedroom; {night} looks in during the night."}};
constexpr Variant kHygiene[] = {{"Morning hygiene", "bathroom", "Washing and dressing for the day with help from {morning}."}};
constexpr Variant kBreakfast[] = {{"Breakfast", "dining room", "Porridge, toast and tea in the dining room."}};
constexpr Variant kMorningMeds[] = {
    {"Morning medication", "medication room", "{morning} hands out the morning tablets with a glass of water."}};
constexpr Variant kLunch[] = {{"Lunch", "dining room", "Lunch with the other residents in the dining room."}};
constexpr Variant kRest[] = {{"Afternoon rest", "bedroom", "Quiet rest or a nap in the bedroom."}};
constexpr Variant kTea[] = {{"Afternoon tea", "lounge", "Tea and biscuits in the lounge."}};
constexpr Variant kVisit[] = {{"Family visit", "lounge", "Visit from family; {family} comes to see {first}."}};
constexpr Variant kDinner[] = {{"Dinner", "dining room", "Evening meal in the dining room."}};
constexpr Variant kEveningMeds[] = {
    {"Evening medication", "medication room", "{afternoon} hands out the evening tablets."}};
constexpr Variant kRelax[] = {{"Relaxation", "lounge", "Listening to the radio or watching television in the lounge."}};
constexpr Variant kBedtime[] = {{"Bedtime routine", "bedroom", "Getting washed and changed for bed with help from {afternoon}."}};

const SlotTemplate kDay[] = {
    {"00:00", "07:00", kNightSleep, 1, Shift::night},
    {"07:00", "07:30", kHygiene, 1, Shift::morning},
    {"07:30", "08:30", kBreakfast, 1, Shift::morning},
    {"08:30", "09:00", kMorningMeds, 1, Shift::morning},
    {"09:30", "10:30", kExercise, std::size(kExercise), Shift::morning},
    {"10:30", "11:30", kClub, std::size(kClub), Shift::morning},
    {"12:00", "13:00", kLunch, 1, Shift::morning},
    {"13:00", "14:30", kRest, 1, Shift::morning},
    {"14:30", "15:00", kTea, 1, Shift::afternoon},
    {"15:00", "16:00", kVisit, 1, Shift::afternoon, true},
    {"16:00", "17:00", kAfternoon, std::size(kAfternoon), Shift::afternoon},
    {"17:30", "18:30", kDinner, 1, Shift::afternoon},
    {"18:30", "19:00", kEveningMeds, 1, Shift::afternoon},
    {"19:00", "20:30", kRelax, 1, Shift::afternoon},
    {"20:30", "21:30", kBedtime, 1, Shift::afternoon},
    {"21:30", "24:00", kNightSleep, 1, Shift::night},
};

constexpr std::size_t kClubSlot = 5;

enum class Dating { exact, span };

struct EventTemplate {
    const char* key; // word a dialogue uses to refer to the event
    const char* title;
    const char* description;
    const char* tone;
    Dating dating;
    int age_from;
    int age_to;
};

const EventTemplate kEvents[] = {
    {"christmas", "Christmas with the grandchildren",
     "A big family Christmas with decorations and presents; {p} carved the turkey.", "joyful", Dating::exact, 60, 66},
    {"birthday", "Seventieth birthday party", "Family and friends gathered for {first}'s seventieth birthday with a cake.",
     "joyful", Dating::exact, 70, 70},
    {"fishing", "Fishing trip at the lake", "{first} and {p} went fishing at the lake and caught a big trout.", "joyful",
     Dating::span, 30, 36},
    {"wedding", "Wedding at the village church", "{first} got married at the village church; {p} remembers the dancing.",
     "joyful", Dating::exact, 22, 27},
    {"seaside", "Seaside holiday", "A summer holiday by the seaside with {p}, building sandcastles on the beach.",
     "warm", Dating::span, 35, 40},
    {"job", "First job at the post office", "{first} started work at the post office and {p} still mentions the uniform.",
     "proud", Dating::exact, 16, 18},
    {"roses", "Planting the rose garden", "{first} and {p} planted roses and flowers in the back garden.", "warm",
     Dating::span, 45, 50},
    {"choir", "Singing in the church choir", "{first} sang in the church choir every Sunday with {p}.", "nostalgic",
     Dating::span, 40, 55},
    {"dancing", "Dancing at the village hall", "{first} and {p} went dancing at the village hall on Saturday nights.",
     "bittersweet", Dating::span, 20, 25},
};

constexpr const char* kMonths[] = {"January", "February", "March",     "April",   "May",      "June",
                                   "July",    "August",   "September", "October", "November", "December"};

std::string hhmm(TimeOfDay t) { return t.to_string(); }

Timestamp at(year_month_day date, TimeOfDay t) {
    return std::chrono::sys_days{date} + std::chrono::minutes{t.minutes()};
}

struct Context {
    PatientDraft& draft;
    Picker& pick;
    year_month_day date;
    int birth_year;
    std::vector<std::size_t> event_templates; // index into kEvents per recalled event, in draft order
    std::vector<std::string> event_people;    // participant besides the patient, per recalled event

    const PatientProfile& profile() const { return draft.profile; }
    std::string first() const { return first_name(draft.profile.name); }
    const std::string& visitor() const { return draft.profile.family.front().name; }
    std::string other_relative() const {
        const auto& f = draft.profile.family;
        return f.size() > 1 ? f[1].name : draft.profile.friends.front();
    }
    const DailyLogEntry& entry(std::string_view name) const {
        for (const auto& e : draft.daily_log) {
            if (e.activity == name) return e;
        }
        return draft.daily_log.front();
    }
    const DailyLogEntry& entry_at(std::size_t slot) const { return draft.daily_log[slot]; }
    std::optional<std::size_t> event_with_key(std::string_view key) const {
        for (std::size_t i = 0; i < event_templates.size(); ++i) {
            if (kEvents[event_templates[i]].key == key) return i;
        }
        return std::nullopt;
    }
    const DailyLogEntry* next_after(TimeOfDay t) const {
        for (const auto& e : draft.daily_log) {
            if (e.slot.start > t) return &e;
        }
        return nullptr;
    }
    const DailyLogEntry* current(TimeOfDay t) const {
        const DailyLogEntry* best = nullptr;
        for (const auto& e : draft.daily_log) {
            if (e.slot.contains(t) && (!best || e.slot.start > best->slot.start)) best = &e;
        }
        return best;
    }
};

PatientProfile make_profile(int index, Picker& pick) {
    PatientProfile p;
    char id[16];
    std::snprintf(id, sizeof id, "P%03d", index + 1);
    p.id = id;
    p.name = pick.one(vocab::kPatientFirstNames) + " " + pick.one(vocab::kSurnames);
    p.age = pick.between(72, 92);
    const auto family_names = pick.distinct(vocab::kFamilyFirstNames, static_cast<std::size_t>(pick.between(2, 3)));
    for (const auto& name : family_names) {
        const bool female = std::find(vocab::kFemaleFamilyNames.begin(), vocab::kFemaleFamilyNames.end(), name) !=
                            vocab::kFemaleFamilyNames.end();
        p.family.push_back({name, female ? pick.one(vocab::kFemaleRelations) : pick.one(vocab::kMaleRelations)});
    }
    p.friends = pick.distinct(vocab::kFriendNames, static_cast<std::size_t>(pick.between(1, 2)));
    p.caregivers = pick.distinct(vocab::kCaregiverNames, 3);
    return p;
}

std::vector<DailyLogEntry> make_log(const PatientProfile& p, Picker& pick) {
    std::vector<DailyLogEntry> log;
    const std::string& morning = p.caregivers[0];
    const std::string& afternoon = p.caregivers[1];
    const std::string& night = p.caregivers[2];
    for (const auto& slot : kDay) {
        const Variant& v = slot.variants[slot.variant_count == 1 ? 0 : pick.index(slot.variant_count)];
        DailyLogEntry e;
        e.slot = {TimeOfDay::parse(slot.start), TimeOfDay::parse(slot.end)};
        e.activity = v.name;
        e.location = v.location;
        e.description = v.description;
        replace_all(e.description, "{morning}", morning);
        replace_all(e.description, "{afternoon}", afternoon);
        replace_all(e.description, "{night}", night);
        replace_all(e.description, "{family}", p.family.front().name);
        replace_all(e.description, "{first}", first_name(p.name));
        e.participants.push_back(p.name);
        if (slot.family) e.participants.push_back(p.family.front().name);
        switch (slot.shift) {
        case Shift::morning: e.participants.push_back(morning); break;
        case Shift::afternoon: e.participants.push_back(afternoon); break;
        case Shift::night: e.participants.push_back(night); break;
        }
        log.push_back(std::move(e));
    }
    return log;
}

void make_interviews(Context& ctx) {
    auto& p = ctx.draft.profile;
    std::vector<Relative> interviewees(p.family.begin(), p.family.end());
    interviewees.push_back({p.friends.front(), "friend"});

    // one of the two holiday memories always comes first so that date
    // confusions have something to anchor on
    std::vector<std::size_t> order(std::size(kEvents));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t anchor = ctx.pick.index(2);
    std::swap(order[0], order[anchor]);
    for (std::size_t i = 1; i < order.size(); ++i) std::swap(order[i], order[i + ctx.pick.index(order.size() - i)]);

    for (std::size_t n = 0; n < interviewees.size(); ++n) {
        const EventTemplate& t = kEvents[order[n]];
        const Relative& who = interviewees[n];
        RecalledEvent ev;
        ev.title = t.title;
        ev.description = t.description;
        replace_all(ev.description, "{p}", who.name);
        replace_all(ev.description, "{first}", first_name(p.name));
        ev.tone = t.tone;
        ev.participants = {p.name, who.name};
        const int y = ctx.birth_year + ctx.pick.between(t.age_from, t.age_to);
        if (t.dating == Dating::exact) {
            const bool christmas = std::string_view(t.key) == "christmas";
            const unsigned m = christmas ? 12u : static_cast<unsigned>(ctx.pick.between(1, 12));
            const unsigned d = christmas ? 25u : static_cast<unsigned>(ctx.pick.between(1, 28));
            ev.period = year_month_day{year{y}, month{m}, day{d}};
        } else {
            ev.period = kg::YearRange{y, y + ctx.pick.between(0, 3)};
        }
        ctx.event_templates.push_back(order[n]);
        ctx.event_people.push_back(who.name);
        ctx.draft.interviews.push_back({who, {std::move(ev)}});
    }
}

DialogueItem clear_dialogue(Context& ctx, int j) {
    DialogueItem d;
    d.kind = DialogueKind::clear;
    auto& pick = ctx.pick;
    switch (j % 7) {
    case 0: {
        // any waking activity, asked a few minutes in
        const auto& e = ctx.entry_at(1 + pick.index(std::size(kDay) - 2));
        const TimeOfDay t{e.slot.start.minutes() + pick.between(0, e.slot.end.minutes() - e.slot.start.minutes() - 1)};
        d.text = pick.index(2) == 0 ? "What should I be doing right now?" : "What's happening at the moment?";
        d.timestamp = at(ctx.date, t);
        d.reference = "It's " + hhmm(t) + ", so it's time for " + lower(e.activity) + " in the " + e.location + ".";
        d.expected_terms = {lower(e.activity), e.location};
        break;
    }
    case 1: {
        const std::string meal = pick.one(std::array{"breakfast", "lunch", "dinner"});
        const auto& e = ctx.entry(capitalized(meal));
        d.text = "What time is " + meal + "?";
        d.timestamp = at(ctx.date, TimeOfDay{pick.between(7 * 60, 21 * 60)});
        d.reference = capitalized(meal) + " is from " + hhmm(e.slot.start) + " to " + hhmm(e.slot.end) + " in the " +
                      e.location + ".";
        d.expected_terms = {meal, hhmm(e.slot.start)};
        break;
    }
    case 2: {
        const auto& e = ctx.entry_at(pick.index(2) == 0 ? kClubSlot : kClubSlot - 1);
        d.text = "Where do we go for the " + lower(e.activity) + "?";
        d.timestamp = at(ctx.date, TimeOfDay{pick.between(8 * 60, 10 * 60)});
        d.reference = capitalized(lower(e.activity)) + " is in the " + e.location + " from " + hhmm(e.slot.start) +
                      " to " + hhmm(e.slot.end) + ".";
        d.expected_terms = {e.location, hhmm(e.slot.start)};
        break;
    }
    case 3: {
        const auto& e = ctx.entry("Family visit");
        d.text = "When is " + ctx.visitor() + " coming to visit?";
        d.timestamp = at(ctx.date, TimeOfDay{pick.between(9 * 60, 14 * 60)});
        d.reference = ctx.visitor() + " visits from " + hhmm(e.slot.start) + " to " + hhmm(e.slot.end) + " in the " +
                      e.location + ".";
        d.expected_terms = {lower(ctx.visitor()), hhmm(e.slot.start)};
        break;
    }
    case 4: {
        const bool morning = pick.index(2) == 0;
        const auto& e = ctx.entry(morning ? "Morning medication" : "Evening medication");
        const std::string& nurse = e.participants.back();
        d.text = std::string("Who helps me with my ") + (morning ? "morning" : "evening") + " medication?";
        d.timestamp = at(ctx.date, TimeOfDay{pick.between(7 * 60, 20 * 60)});
        d.reference = nurse + " gives you your " + lower(e.activity) + " at " + hhmm(e.slot.start) + " in the " +
                      e.location + ".";
        d.expected_terms = {lower(nurse)};
        break;
    }
    case 5: {
        const std::size_t n = static_cast<std::size_t>(j / 7 + pick.index(ctx.event_templates.size())) %
                              ctx.event_templates.size();
        const EventTemplate& t = kEvents[ctx.event_templates[n]];
        const auto& ev = ctx.draft.interviews[n].events.front();
        d.text = "Do you remember the " + lower(ev.title) + "?";
        d.timestamp = at(ctx.date, TimeOfDay{pick.between(9 * 60, 20 * 60)});
        d.reference = "Yes. " + ev.description + " " + ctx.event_people[n] + " told us all about it.";
        d.expected_terms = {std::string_view(t.key) == "job" ? "post office" : t.key, lower(ctx.event_people[n])};
        break;
    }
    default: {
        const auto& lunch = ctx.entry("Lunch");
        const auto* next = ctx.next_after(lunch.slot.start);
        d.text = "What do we do after lunch?";
        d.timestamp = at(ctx.date, TimeOfDay{pick.between(10 * 60, 12 * 60)});
        d.reference = "After lunch you have " + lower(next->activity) + " in the " + next->location + " from " +
                      hhmm(next->slot.start) + " to " + hhmm(next->slot.end) + ".";
        d.expected_terms = {lower(next->activity), hhmm(next->slot.start)};
        break;
    }
    }
    return d;
}

DialogueItem confused_dialogue(Context& ctx, ConfusionType type) {
    DialogueItem d;
    d.kind = DialogueKind::confused;
    d.confusion_type = type;
    auto& pick = ctx.pick;
    const auto& visit = ctx.entry("Family visit");
    switch (type) {
    case ConfusionType::past_and_present: {
        d.text = "Has " + ctx.visitor() + " been in already? I'm sure I heard them in the kitchen a minute ago.";
        d.timestamp = at(ctx.date, TimeOfDay{pick.between(9 * 60 + 30, 11 * 60)});
        d.reference = ctx.visitor() + " hasn't been in yet today. " + ctx.visitor() + " is coming at " +
                      hhmm(visit.slot.start) + " to the " + visit.location + ".";
        d.expected_terms = {lower(ctx.visitor()), hhmm(visit.slot.start)};
        break;
    }
    case ConfusionType::misremembered_activity: {
        const auto& club = ctx.entry_at(kClubSlot);
        std::size_t other = pick.index(std::size(kClub) - 1);
        if (kClub[other].name == club.activity) other = std::size(kClub) - 1;
        d.text = std::string("Isn't the ") + lower(kClub[other].name) + " on this morning? I'd better find my " +
                 kClubItem[other] + ".";
        d.timestamp = at(ctx.date, TimeOfDay{pick.between(9 * 60, 10 * 60)});
        d.reference = "This morning it's " + lower(club.activity) + " in the " + club.location + " at " +
                      hhmm(club.slot.start) + ".";
        d.expected_terms = {lower(club.activity), hhmm(club.slot.start)};
        break;
    }
    case ConfusionType::nonexistent_appointment: {
        d.text = "Is " + ctx.other_relative() + " coming over this afternoon? This is when they normally drop by.";
        d.timestamp = at(ctx.date, TimeOfDay{pick.between(13 * 60 + 30, 14 * 60 + 30)});
        d.reference = ctx.other_relative() + " isn't due today. " + ctx.visitor() + " is visiting at " +
                      hhmm(visit.slot.start) + " in the " + visit.location + ".";
        d.expected_terms = {lower(ctx.visitor()), hhmm(visit.slot.start)};
        break;
    }
    case ConfusionType::current_date: {
        const bool christmas = ctx.event_with_key("christmas").has_value();
        const auto n = christmas ? *ctx.event_with_key("christmas") : ctx.event_with_key("birthday").value_or(0);
        d.text = christmas ? "Christmas is nearly here, isn't it? Someone needs to bring the decorations down."
                           : "It's nearly my birthday, isn't it? We should order a cake.";
        d.timestamp = at(ctx.date, TimeOfDay{pick.between(9 * 60, 19 * 60)});
        const auto& ev = ctx.draft.interviews[n].events.front();
        d.reference = "Today is " + std::string(kMonths[static_cast<unsigned>(ctx.date.month()) - 1]) + " " +
                      std::to_string(static_cast<unsigned>(ctx.date.day())) + ", so it's not " +
                      (christmas ? "Christmas" : "your birthday") + " yet. You might enjoy remembering " +
                      ev.title + " with " + ctx.event_people[n] + ".";
        d.expected_terms = {christmas ? "christmas" : "birthday", lower(ctx.event_people[n])};
        break;
    }
    case ConfusionType::wrong_location: {
        const auto& e = ctx.entry_at(1 + pick.index(std::size(kDay) - 2));
        const TimeOfDay t{e.slot.start.minutes() + 5};
        d.text = "What is this place? It's not my house.";
        d.timestamp = at(ctx.date, t);
        d.reference = "You're at the care home, in the " + e.location + " for " + lower(e.activity) +
                      ". This is where you live now and we're looking after you.";
        d.expected_terms = {lower(e.activity), e.location};
        break;
    }
    case ConfusionType::repeated_question: {
        const std::string meal = pick.one(std::array{"breakfast", "lunch", "dinner"});
        const auto& e = ctx.entry(capitalized(meal));
        d.text = "What time is " + meal + " again? You told me " + std::to_string(e.slot.start.hour() % 12 + 1) +
                 " o'clock, didn't you? Or was it later?";
        d.timestamp = at(ctx.date, TimeOfDay{e.slot.start.minutes() - pick.between(30, 90)});
        d.reference = capitalized(meal) + " is at " + hhmm(e.slot.start) + " in the " + e.location + ".";
        d.expected_terms = {meal, hhmm(e.slot.start)};
        break;
    }
    case ConfusionType::life_stage: {
        const bool job = ctx.event_with_key("job").has_value();
        const TimeOfDay t{pick.between(16 * 60, 17 * 60 + 20)};
        const auto* next = ctx.next_after(t);
        d.text = std::string("I can't be late for ") + (job ? "work" : "school") + " tomorrow. Where has my bag gone?";
        d.timestamp = at(ctx.date, t);
        d.reference = "There's nothing to pack for today. Next on your schedule is " + lower(next->activity) +
                      " at " + hhmm(next->slot.start) + ".";
        d.expected_terms = {lower(next->activity), hhmm(next->slot.start)};
        break;
    }
    case ConfusionType::vague_statement: {
        d.text = "The man from before... er... he promised to come back today, didn't he?";
        d.timestamp = at(ctx.date, TimeOfDay{pick.between(10 * 60, 14 * 60)});
        d.reference = ctx.visitor() + " is coming to visit today at " + hhmm(visit.slot.start) + " in the " +
                      visit.location + ".";
        d.expected_terms = {lower(ctx.visitor()), hhmm(visit.slot.start)};
        break;
    }
    case ConfusionType::environmental: {
        d.text = "I know this garden from somewhere. Didn't we put these flowers in last spring?";
        d.timestamp = at(ctx.date, TimeOfDay{pick.between(9 * 60 + 30, 10 * 60 + 25)});
        if (auto n = ctx.event_with_key("roses")) {
            d.reference = "This is the care home garden. You may be thinking of planting the rose garden with " +
                          ctx.event_people[*n] + ".";
            d.expected_terms = {"garden", lower(ctx.event_people[*n])};
        } else {
            d.reference = "This is the care home garden, and the flowers were planted by the gardeners here.";
            d.expected_terms = {"garden"};
        }
        break;
    }
    }
    return d;
}

} // namespace

PatientDraft TemplateSource::draft(int index, std::uint64_t seed, std::uint64_t corpus_seed) {
    Picker pick(seed);
    PatientDraft draft;
    draft.profile = make_profile(index, pick);
    draft.daily_log = make_log(draft.profile, pick);

    const auto first_day = std::chrono::sys_days{year{2024} / 5 / 1};
    Context ctx{draft, pick, year_month_day{first_day + std::chrono::days{index % 28}}, 2024 - draft.profile.age,
                {}, {}};
    make_interviews(ctx);

    // the two confused turns sit at fixed positions among the clear ones
    constexpr int kConfusedSlots[kConfusedPerPatient] = {4, 9};
    int clear = 0;
    int confused = 0;
    for (int k = 0; k < kDialoguesPerPatient; ++k) {
        DialogueItem d;
        if (confused < kConfusedPerPatient && k == kConfusedSlots[confused]) {
            d = confused_dialogue(ctx, confusion_type_for(corpus_seed, index, confused));
            ++confused;
        } else {
            d = clear_dialogue(ctx, clear++);
        }
        char id[24];
        std::snprintf(id, sizeof id, "%s-D%02d", draft.profile.id.c_str(), k + 1);
        d.id = id;
        std::erase_if(d.expected_terms, [](const std::string& t) { return t.empty(); });
        draft.dialogues.push_back(std::move(d));
    }
    return draft;
}

} // namespace memoria::synth
