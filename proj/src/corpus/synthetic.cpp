#include "hijackmap/corpus/synthetic.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <ctime>
#include <numeric>
#include <string_view>
#include <vector>

#include "hijackmap/random.hpp"

namespace hijackmap::corpus {

namespace {

// Suburbs around the target city. Paarl, Malmesbury and Worcester sit
// outside the default 50 km radius.
constexpr std::array kPlaces = {
    SyntheticPlace{"claremont", -33.9806, 18.4653},
    SyntheticPlace{"khayelitsha", -34.0403, 18.6778},
    SyntheticPlace{"gugulethu", -33.9850, 18.5670},
    SyntheticPlace{"mitchells plain", -34.0450, 18.6180},
    SyntheticPlace{"nyanga", -33.9930, 18.5800},
    SyntheticPlace{"philippi", -34.0070, 18.5690},
    SyntheticPlace{"delft", -33.9700, 18.6400},
    SyntheticPlace{"bellville", -33.9000, 18.6300},
    SyntheticPlace{"parow", -33.9000, 18.5800},
    SyntheticPlace{"goodwood", -33.9100, 18.5500},
    SyntheticPlace{"athlone", -33.9670, 18.5040},
    SyntheticPlace{"langa", -33.9440, 18.5300},
    SyntheticPlace{"woodstock", -33.9270, 18.4470},
    SyntheticPlace{"observatory", -33.9380, 18.4720},
    SyntheticPlace{"sea point", -33.9150, 18.3880},
    SyntheticPlace{"green point", -33.9030, 18.4060},
    SyntheticPlace{"camps bay", -33.9510, 18.3770},
    SyntheticPlace{"rondebosch", -33.9600, 18.4740},
    SyntheticPlace{"wynberg", -34.0030, 18.4680},
    SyntheticPlace{"muizenberg", -34.1080, 18.4700},
    SyntheticPlace{"kuils river", -33.9290, 18.6870},
    SyntheticPlace{"durbanville", -33.8320, 18.6470},
    SyntheticPlace{"table view", -33.8250, 18.4900},
    SyntheticPlace{"milnerton", -33.8700, 18.5000},
    SyntheticPlace{"maitland", -33.9230, 18.4890},
    SyntheticPlace{"elsies river", -33.9230, 18.5760},
    SyntheticPlace{"bishop lavis", -33.9480, 18.5750},
    SyntheticPlace{"manenberg", -33.9840, 18.5510},
    SyntheticPlace{"hanover park", -33.9900, 18.5400},
    SyntheticPlace{"lavender hill", -34.0640, 18.4940},
    SyntheticPlace{"grassy park", -34.0480, 18.5000},
    SyntheticPlace{"hout bay", -34.0450, 18.3600},
    SyntheticPlace{"fish hoek", -34.1370, 18.4300},
    SyntheticPlace{"somerset west", -34.0840, 18.8520},
    SyntheticPlace{"stellenbosch", -33.9360, 18.8610},
    SyntheticPlace{"brackenfell", -33.8710, 18.6990},
    SyntheticPlace{"atlantis", -33.5680, 18.4900},
    SyntheticPlace{"paarl", -33.7340, 18.9620},
    SyntheticPlace{"malmesbury", -33.4610, 18.7270},
    SyntheticPlace{"worcester", -33.6460, 19.4430},
};

constexpr std::array<std::string_view, 10> kRelevantTemplates = {
    "Hijacking in {place} {time}: {vehicle} taken at gunpoint, driver unharmed",
    "Avoid {place}! Hijacking in progress on {road}, {vehicle} involved",
    "Another hijacking reported in {place} {time}. Suspects fled in a {vehicle}",
    "{Vehicle} hijacked at gunpoint near {place} {time} #hijacking",
    "Breaking: hijacking on {road} near {place}, armed suspects took a {vehicle}",
    "My neighbour survived a hijacking outside her house in {place} {time}. Please be careful",
    "Police responding to a hijacking at a petrol station in {place}, {vehicle} recovered later",
    "Attempted hijacking in {place} {time}, driver managed to escape",
    "Hijacking alert {place}: three armed men in a {vehicle} targeting motorists {time}",
    "Witnessed a hijacking at the traffic lights in {place} {time}. {Vehicle} driven off",
};

constexpr std::array<std::string_view, 14> kIrrelevantTemplates = {
    "Watching a documentary about the 1970s plane hijacking {time}",
    "The opposition keeps hijacking the debate on {topic}",
    "New hijacking statistics released by the ministry show a national increase",
    "Stop hijacking my playlist, {person}!",
    "Traffic is slow on {road} {time}",
    "Great book on the history of aircraft hijacking, highly recommend",
    "Beautiful weather in Cape Town {time}",
    "Cape Town council accused of hijacking the {topic} budget",
    "Lovely sunset over {place} {time}",
    "Road safety workshop on avoiding hijacking next week, register online",
    "This thread has been hijacking my whole afternoon lol",
    "Movie night: a thriller about a bus hijacking in Cape Town",
    "Load shedding again in {place}, stage {stage} {time}",
    "Insurance premiums for cars keep rising, everyone blames hijacking stats",
};

constexpr std::array<std::string_view, 9> kVehicles = {
    "white Toyota Hilux", "silver VW Polo",  "grey BMW X5",
    "red Ford Ranger",    "black Mercedes",  "blue Nissan NP200",
    "Toyota Quantum taxi", "delivery van",   "white Hyundai i20",
};
constexpr std::array<std::string_view, 8> kTimes = {
    "this morning", "tonight",      "earlier today", "at around 7am",
    "just now",     "a few minutes ago", "last night", "this afternoon",
};
constexpr std::array<std::string_view, 8> kRoads = {
    "the N2",          "the N1",            "the M5",          "Main Road",
    "Voortrekker Road", "Klipfontein Road", "Lansdowne Road", "the R300",
};
constexpr std::array<std::string_view, 5> kTopics = {"housing", "transport", "water",
                                                     "education", "tourism"};
constexpr std::array<std::string_view, 4> kPersons = {"bro", "guys", "Thabo", "sis"};
constexpr std::array<std::string_view, 5> kStages = {"2", "3", "4", "5", "6"};

std::string title_case(std::string_view s) {
  std::string out(s);
  bool start = true;
  for (auto& c : out) {
    if (start && std::isalpha(static_cast<unsigned char>(c))) {
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    start = c == ' ';
  }
  return out;
}

template <std::size_t N>
std::string_view pick(const std::array<std::string_view, N>& options, Rng& rng) {
  return options[rng.below(N)];
}

std::string fill(std::string_view tmpl, Rng& rng) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] != '{') {
      out += tmpl[i++];
      continue;
    }
    const auto close = tmpl.find('}', i);
    const auto slot = tmpl.substr(i + 1, close - i - 1);
    i = close + 1;
    if (slot == "place") {
      out += title_case(kPlaces[rng.below(kPlaces.size())].name);
    } else if (slot == "vehicle") {
      out += pick(kVehicles, rng);
    } else if (slot == "Vehicle") {
      std::string v(pick(kVehicles, rng));
      v[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(v[0])));
      out += v;
    } else if (slot == "time") {
      out += pick(kTimes, rng);
    } else if (slot == "road") {
      out += pick(kRoads, rng);
    } else if (slot == "topic") {
      out += pick(kTopics, rng);
    } else if (slot == "person") {
      out += pick(kPersons, rng);
    } else if (slot == "stage") {
      out += pick(kStages, rng);
    }
  }
  return out;
}

std::string format_utc(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::span<const SyntheticPlace> synthetic_places() { return kPlaces; }

Dataset generate_synthetic_corpus(std::uint64_t seed, std::size_t relevant_count,
                                  std::size_t irrelevant_count) {
  Dataset ds("synthetic:seed=" + std::to_string(seed));
  Rng rng(seed);
  std::vector<int> labels(relevant_count, 1);
  labels.resize(relevant_count + irrelevant_count, 0);
  rng.shuffle(std::span(labels));

  std::time_t clock = 1646092800;  // 2022-03-01T00:00:00Z
  for (std::size_t i = 0; i < labels.size(); ++i) {
    TweetRecord r;
    char id[48];
    std::snprintf(id, sizeof id, "s%llu-%05zu", static_cast<unsigned long long>(seed), i + 1);
    r.id = id;
    r.text = labels[i] == 1
                 ? fill(kRelevantTemplates[rng.below(kRelevantTemplates.size())], rng)
                 : fill(kIrrelevantTemplates[rng.below(kIrrelevantTemplates.size())], rng);
    clock += static_cast<std::time_t>(60 * (1 + rng.below(600)));
    r.created_at = format_utc(clock);
    r.label = labels[i];
    ds.add(std::move(r));
  }
  return ds;
}

}  // namespace hijackmap::corpus
