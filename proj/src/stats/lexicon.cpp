#include "lexicon.hpp"

#include <string>
#include <unordered_map>
#include <unordered_set>

namespace ik::stats::lexicon {

namespace {

const std::unordered_set<std::string_view>& verbs() {
  static const std::unordered_set<std::string_view> kVerbs = {
      "accept", "achieve", "act", "adapt", "add", "address", "adjust", "adopt", "advise", "affect", "agree",
      "aim", "allow", "alter", "analyse", "analyze", "annotate", "announce", "answer", "anticipate", "apologize",
      "appear", "apply", "appreciate", "approach", "approve", "argue", "arrange", "ask", "assemble", "assess",
      "assign", "assist", "assume", "attach", "attack", "attempt", "attend", "attract", "avoid", "bake", "balance",
      "base", "be", "bear", "beat", "become", "begin", "believe", "belong", "benefit", "bind", "bite", "blend",
      "block", "boil", "book", "boost", "borrow", "brainstorm", "break", "breathe", "bring", "broadcast", "build",
      "burn", "buy", "calculate", "call", "cancel", "capture", "care", "carry", "catch", "categorize", "cause",
      "celebrate", "change", "charge", "chase", "check", "choose", "cite", "claim", "clarify", "classify", "clean",
      "clear", "climb", "close", "code", "collaborate", "collect", "combine", "come", "comment", "communicate",
      "compare", "compile", "complete", "compose", "compute", "concentrate", "conclude", "conduct", "configure",
      "confirm", "connect", "consider", "consist", "construct", "consume", "contact", "contain", "continue",
      "contribute", "control", "convert", "convey", "convince", "cook", "copy", "correct", "cost", "count",
      "cover", "craft", "create", "criticize", "cross", "cultivate", "cut", "deal", "debate", "debug", "decide",
      "declare", "decode", "decrease", "define", "delete", "deliver", "demonstrate", "deny", "depend", "derive",
      "describe", "design", "destroy", "detail", "detect", "determine", "develop", "devise", "die", "differ",
      "discover", "discuss", "display", "distinguish", "distribute", "divide", "do", "document", "donate", "draft",
      "draw", "dream", "dress", "drink", "drive", "drop", "earn", "eat", "edit", "educate", "elaborate", "eliminate",
      "email", "emphasize", "employ", "enable", "encode", "encourage", "end", "engage", "enhance", "enjoy",
      "ensure", "enter", "establish", "estimate", "evaluate", "examine", "exchange", "execute", "exercise", "exist",
      "expand", "expect", "experience", "explain", "explore", "express", "extend", "extract", "face", "fail",
      "fall", "feed", "feel", "fetch", "fight", "fill", "filter", "find", "finish", "fit", "fix", "fly", "focus",
      "follow", "forget", "forgive", "form", "format", "formulate", "foster", "frame", "gain", "gather", "generate",
      "get", "give", "go", "grab", "graph", "greet", "grow", "guess", "guide", "handle", "happen", "hate", "have",
      "hear", "help", "hide", "highlight", "hire", "hit", "hold", "hope", "host", "identify", "ignore",
      "illustrate", "imagine", "implement", "imply", "import", "improve", "include", "incorporate", "increase",
      "indicate", "influence", "inform", "insert", "inspect", "inspire", "install", "integrate", "interpret",
      "interview", "introduce", "invent", "invest", "investigate", "invite", "involve", "join", "judge", "jump",
      "justify", "keep", "kill", "know", "label", "lack", "launch", "lay", "lead", "learn", "leave", "lend", "let",
      "lie", "lift", "like", "limit", "link", "list", "listen", "live", "locate", "look", "lose", "love", "lower",
      "maintain", "make", "manage", "map", "mark", "market", "match", "matter", "mean", "measure", "meet",
      "memorize", "mention", "merge", "mind", "minimize", "miss", "mix", "modify", "monitor", "motivate", "move",
      "multiply", "name", "narrate", "need", "negotiate", "note", "notice", "obtain", "occur", "offer", "open",
      "operate", "optimize", "order", "organise", "organize", "outline", "overcome", "own", "paint", "paraphrase",
      "participate", "pass", "pay", "perform", "persuade", "pick", "pitch", "place", "plan", "plant", "play",
      "plot", "point", "polish", "post", "pour", "practice", "practise", "praise", "predict", "prefer", "prepare",
      "present", "preserve", "prevent", "print", "prioritize", "produce", "program", "promote", "pronounce",
      "proofread", "propose", "protect", "prove", "provide", "publish", "pull", "purchase", "pursue", "push", "put",
      "quote", "raise", "rank", "rate", "reach", "read", "realize", "rearrange", "receive", "recite", "recognize",
      "recommend", "record", "recycle", "reduce", "refer", "reflect", "reformat", "reframe", "refuse", "regard",
      "reject", "relate", "release", "rely", "remain", "remember", "remind", "remove", "rename", "reorder",
      "repeat", "rephrase", "replace", "reply", "report", "represent", "request", "require", "research", "reserve",
      "resolve", "respond", "restate", "restructure", "retain", "retrieve", "return", "reveal", "reverse",
      "review", "revise", "rewrite", "ride", "rise", "round", "run", "save", "say", "scan", "schedule", "score",
      "search", "see", "seek", "seem", "select", "sell", "send", "separate", "serve", "set", "settle", "shape",
      "share", "shift", "shorten", "show", "simplify", "simulate", "sing", "sit", "sketch", "skip", "sleep",
      "slice", "smile", "solve", "sort", "sound", "speak", "specify", "spell", "spend", "split", "spread", "stand",
      "start", "state", "stay", "steal", "stop", "store", "strengthen", "stress", "structure", "study", "submit",
      "substitute", "subtract", "succeed", "suggest", "sum", "summarise", "summarize", "supply", "support",
      "suppose", "surround", "survive", "swim", "tag", "take", "talk", "target", "taste", "teach", "tell", "tend",
      "test", "thank", "think", "throw", "tighten", "tokenize", "touch", "track", "trade", "train", "transfer",
      "transform", "translate", "transport", "travel", "treat", "trim", "try", "turn", "tweet", "type",
      "understand", "undertake", "unify", "update", "upgrade", "upload", "urge", "use", "utilize", "validate",
      "value", "verify", "view", "visit", "visualize", "wait", "wake", "walk", "want", "warn", "wash", "watch",
      "wear", "weigh", "welcome", "win", "wish", "wonder", "work", "worry", "wrap", "write"};
  return kVerbs;
}

const std::unordered_map<std::string_view, std::string_view>& irregular_verbs() {
  static const std::unordered_map<std::string_view, std::string_view> kIrregular = {
      {"am", "be"}, {"is", "be"}, {"are", "be"}, {"was", "be"}, {"were", "be"}, {"been", "be"},
      {"being", "be"}, {"has", "have"}, {"had", "have"}, {"does", "do"}, {"did", "do"}, {"done", "do"},
      {"wrote", "write"}, {"written", "write"}, {"made", "make"}, {"gave", "give"}, {"given", "give"},
      {"took", "take"}, {"taken", "take"}, {"told", "tell"}, {"found", "find"}, {"got", "get"},
      {"gotten", "get"}, {"went", "go"}, {"gone", "go"}, {"came", "come"}, {"saw", "see"}, {"seen", "see"},
      {"knew", "know"}, {"known", "know"}, {"thought", "think"}, {"brought", "bring"}, {"bought", "buy"},
      {"built", "build"}, {"chose", "choose"}, {"chosen", "choose"}, {"drew", "draw"}, {"drawn", "draw"},
      {"taught", "teach"}, {"caught", "catch"}, {"kept", "keep"}, {"held", "hold"}, {"led", "lead"},
      {"left", "leave"}, {"lost", "lose"}, {"meant", "mean"}, {"met", "meet"}, {"paid", "pay"},
      {"ran", "run"}, {"said", "say"}, {"sold", "sell"}, {"sent", "send"}, {"spent", "spend"},
      {"spoke", "speak"}, {"spoken", "speak"}, {"stood", "stand"}, {"sang", "sing"}, {"sung", "sing"},
      {"began", "begin"}, {"begun", "begin"}, {"became", "become"}, {"broke", "break"}, {"broken", "break"},
      {"ate", "eat"}, {"eaten", "eat"}, {"drove", "drive"}, {"driven", "drive"}, {"felt", "feel"},
      {"fed", "feed"}, {"fought", "fight"}, {"flew", "fly"}, {"flown", "fly"}, {"forgot", "forget"},
      {"forgotten", "forget"}, {"grew", "grow"}, {"grown", "grow"}, {"heard", "hear"}, {"hid", "hide"},
      {"hidden", "hide"}, {"laid", "lay"}, {"lent", "lend"}, {"rode", "ride"},
      {"ridden", "ride"}, {"rose", "rise"}, {"risen", "rise"}, {"sat", "sit"}, {"slept", "sleep"},
      {"stole", "steal"}, {"stolen", "steal"}, {"swam", "swim"}, {"threw", "throw"}, {"thrown", "throw"},
      {"understood", "understand"}, {"woke", "wake"}, {"wore", "wear"}, {"worn", "wear"}, {"won", "win"},
      {"read", "read"}, {"put", "put"}, {"set", "set"}, {"cut", "cut"}, {"let", "let"}, {"hit", "hit"},
      {"cost", "cost"}, {"spread", "spread"}, {"split", "split"}, {"fell", "fall"}, {"fallen", "fall"},
      {"bit", "bite"}, {"bitten", "bite"}, {"drank", "drink"}, {"drunk", "drink"}, {"bore", "bear"},
      {"born", "bear"}, {"beaten", "beat"}, {"bound", "bind"}, {"dealt", "deal"}, {"dreamt", "dream"},
      {"learnt", "learn"}, {"overcame", "overcome"}, {"undertook", "undertake"}, {"rewrote", "rewrite"},
      {"rewritten", "rewrite"}, {"proofread", "proofread"}, {"forgave", "forgive"}, {"forgiven", "forgive"},
      {"sought", "seek"}, {"shown", "show"}, {"proven", "prove"}, {"died", "die"}, {"dying", "die"},
      {"lying", "lie"}, {"lied", "lie"}};
  return kIrregular;
}

const std::unordered_map<std::string_view, std::string_view>& irregular_nouns() {
  static const std::unordered_map<std::string_view, std::string_view> kIrregular = {
      {"children", "child"}, {"people", "person"}, {"men", "man"}, {"women", "woman"}, {"mice", "mouse"},
      {"feet", "foot"}, {"teeth", "tooth"}, {"geese", "goose"}, {"criteria", "criterion"},
      {"phenomena", "phenomenon"}, {"analyses", "analysis"}, {"hypotheses", "hypothesis"}, {"theses", "thesis"},
      {"crises", "crisis"}, {"bases", "basis"}, {"lives", "life"}, {"wives", "wife"}, {"knives", "knife"},
      {"leaves", "leaf"}, {"halves", "half"}, {"wolves", "wolf"}, {"shelves", "shelf"}, {"selves", "self"},
      {"thieves", "thief"}, {"loaves", "loaf"}, {"data", "datum"}, {"series", "series"}, {"species", "species"},
      {"news", "news"}, {"physics", "physics"}, {"mathematics", "mathematics"}, {"economics", "economics"},
      {"politics", "politics"}, {"lyrics", "lyric"}, {"sheep", "sheep"}, {"fish", "fish"}, {"deer", "deer"},
      {"indices", "index"}, {"matrices", "matrix"}, {"vertices", "vertex"}, {"appendices", "appendix"},
      {"cacti", "cactus"}, {"fungi", "fungus"}, {"nuclei", "nucleus"}, {"radii", "radius"}, {"stimuli", "stimulus"},
      {"media", "media"}, {"dice", "die"}, {"oxen", "ox"}, {"heroes", "hero"}, {"potatoes", "potato"},
      {"tomatoes", "tomato"}, {"echoes", "echo"}, {"movies", "movie"}, {"cookies", "cookie"}, {"ties", "tie"},
      {"pies", "pie"}, {"lies", "lie"}, {"calories", "calorie"}, {"zombies", "zombie"}, {"species", "species"}};
  return kIrregular;
}

const std::unordered_set<std::string_view>& adjectives() {
  static const std::unordered_set<std::string_view> kAdjectives = {
      "good", "better", "best", "bad", "worse", "worst", "new", "old", "young", "big", "small", "large", "little",
      "long", "short", "high", "low", "great", "important", "different", "same", "similar", "main", "major",
      "minor", "key", "basic", "simple", "complex", "easy", "hard", "difficult", "clear", "strong", "weak",
      "healthy", "happy", "sad", "funny", "interesting", "creative", "original", "brief", "detailed", "concise",
      "catchy", "persuasive", "formal", "informal", "professional", "personal", "social", "natural", "human",
      "global", "local", "national", "public", "private", "free", "full", "whole", "entire", "real", "true",
      "false", "correct", "wrong", "right", "left", "possible", "impossible", "likely", "common", "rare",
      "popular", "famous", "modern", "ancient", "traditional", "current", "recent", "future", "past", "early",
      "late", "next", "last", "first", "second", "third", "final", "following", "above", "given", "specific",
      "general", "special", "particular", "certain", "various", "several", "unique", "positive", "negative",
      "effective", "efficient", "useful", "helpful", "harmful", "safe", "dangerous", "beautiful", "ugly", "nice",
      "fun", "cool", "hot", "cold", "warm", "dark", "bright", "light", "heavy", "fast", "slow", "quick", "rich",
      "poor", "cheap", "expensive", "fresh", "green", "blue", "red", "yellow", "black", "white", "brown",
      "orange", "purple", "pink", "gray", "grey", "golden", "silver", "wooden", "digital", "online", "virtual",
      "artificial", "environmental", "economic", "political", "scientific", "technical", "medical", "legal",
      "financial", "cultural", "historical", "educational", "fictional", "short-term", "long-term", "daily",
      "weekly", "monthly", "yearly", "annual", "perfect", "ideal", "favorite", "favourite", "exciting", "boring",
      "amazing", "wonderful", "terrible", "horrible", "excellent", "sustainable", "renewable", "vegan",
      "vegetarian", "delicious", "romantic", "spooky", "magical", "mysterious", "brave", "kind", "friendly",
      "polite", "rude", "smart", "intelligent", "clever", "wise", "accurate", "precise", "relevant", "appropriate",
      "suitable", "proper", "necessary", "essential", "potential", "additional", "extra", "other", "own", "only",
      "hypothetical", "fictional", "imaginary", "humorous", "inspirational", "motivational", "informative",
      "descriptive", "short", "quick", "step-by-step", "two-sentence", "one-sentence", "brand-new"};
  return kAdjectives;
}

const std::unordered_map<std::string_view, Pos>& closed() {
  static const std::unordered_map<std::string_view, Pos> kClosed = {
      // determiners and possessives
      {"a", Pos::det}, {"an", Pos::det}, {"the", Pos::det}, {"this", Pos::det}, {"that", Pos::det},
      {"these", Pos::det}, {"those", Pos::det}, {"my", Pos::det}, {"your", Pos::det}, {"his", Pos::det},
      {"its", Pos::det}, {"our", Pos::det}, {"their", Pos::det}, {"some", Pos::det}, {"any", Pos::det},
      {"each", Pos::det}, {"every", Pos::det}, {"all", Pos::det}, {"no", Pos::det}, {"another", Pos::det},
      {"both", Pos::det}, {"either", Pos::det}, {"neither", Pos::det}, {"few", Pos::det}, {"many", Pos::det},
      {"much", Pos::det}, {"more", Pos::det}, {"most", Pos::det}, {"such", Pos::det}, {"what", Pos::pron},
      {"which", Pos::pron}, {"whose", Pos::det},
      // pronouns
      {"i", Pos::pron}, {"you", Pos::pron}, {"he", Pos::pron}, {"she", Pos::pron}, {"it", Pos::pron},
      {"we", Pos::pron}, {"they", Pos::pron}, {"me", Pos::pron}, {"him", Pos::pron}, {"her", Pos::pron},
      {"us", Pos::pron}, {"them", Pos::pron}, {"myself", Pos::pron}, {"yourself", Pos::pron},
      {"himself", Pos::pron}, {"herself", Pos::pron}, {"itself", Pos::pron}, {"ourselves", Pos::pron},
      {"themselves", Pos::pron}, {"who", Pos::pron}, {"whom", Pos::pron}, {"something", Pos::pron},
      {"anything", Pos::pron}, {"everything", Pos::pron}, {"nothing", Pos::pron}, {"someone", Pos::pron},
      {"anyone", Pos::pron}, {"everyone", Pos::pron}, {"one", Pos::num},
      // auxiliaries and modals
      {"am", Pos::aux}, {"is", Pos::aux}, {"are", Pos::aux}, {"was", Pos::aux}, {"were", Pos::aux},
      {"be", Pos::aux}, {"been", Pos::aux}, {"being", Pos::aux}, {"can", Pos::aux}, {"could", Pos::aux},
      {"will", Pos::aux}, {"would", Pos::aux}, {"shall", Pos::aux}, {"should", Pos::aux}, {"may", Pos::aux},
      {"might", Pos::aux}, {"must", Pos::aux}, {"can't", Pos::aux}, {"cannot", Pos::aux}, {"won't", Pos::aux},
      {"don't", Pos::aux}, {"doesn't", Pos::aux}, {"didn't", Pos::aux}, {"isn't", Pos::aux},
      {"aren't", Pos::aux}, {"wasn't", Pos::aux}, {"weren't", Pos::aux}, {"i'm", Pos::aux},
      {"it's", Pos::aux}, {"that's", Pos::aux}, {"here's", Pos::aux}, {"there's", Pos::aux},
      {"let's", Pos::aux}, {"i'll", Pos::aux}, {"i've", Pos::aux}, {"i'd", Pos::aux}, {"you're", Pos::aux},
      {"we're", Pos::aux}, {"they're", Pos::aux},
      // prepositions
      {"of", Pos::adp}, {"in", Pos::adp}, {"on", Pos::adp}, {"at", Pos::adp}, {"by", Pos::adp},
      {"for", Pos::adp}, {"with", Pos::adp}, {"about", Pos::adp}, {"against", Pos::adp},
      {"between", Pos::adp}, {"into", Pos::adp}, {"through", Pos::adp}, {"during", Pos::adp},
      {"before", Pos::adp}, {"after", Pos::adp}, {"above", Pos::adp}, {"below", Pos::adp}, {"to", Pos::adp},
      {"from", Pos::adp}, {"over", Pos::adp}, {"under", Pos::adp}, {"around", Pos::adp}, {"among", Pos::adp},
      {"within", Pos::adp}, {"without", Pos::adp}, {"across", Pos::adp}, {"behind", Pos::adp},
      {"beyond", Pos::adp}, {"per", Pos::adp}, {"via", Pos::adp}, {"than", Pos::adp}, {"as", Pos::adp},
      {"upon", Pos::adp}, {"toward", Pos::adp}, {"towards", Pos::adp}, {"regarding", Pos::adp},
      {"including", Pos::adp}, {"like", Pos::adp},
      // particles
      {"up", Pos::part}, {"down", Pos::part}, {"out", Pos::part}, {"off", Pos::part}, {"away", Pos::part},
      {"back", Pos::part},
      // conjunctions
      {"and", Pos::conj}, {"or", Pos::conj}, {"but", Pos::conj}, {"nor", Pos::conj}, {"so", Pos::conj},
      {"yet", Pos::conj}, {"because", Pos::conj}, {"although", Pos::conj}, {"though", Pos::conj},
      {"while", Pos::conj}, {"if", Pos::conj}, {"unless", Pos::conj}, {"since", Pos::conj},
      {"whether", Pos::conj}, {"when", Pos::conj}, {"where", Pos::conj}, {"how", Pos::conj}, {"why", Pos::conj},
      {"then", Pos::adv},
      // adverbs
      {"very", Pos::adv}, {"really", Pos::adv}, {"quite", Pos::adv}, {"too", Pos::adv}, {"also", Pos::adv},
      {"just", Pos::adv}, {"only", Pos::adv}, {"even", Pos::adv}, {"still", Pos::adv}, {"already", Pos::adv},
      {"always", Pos::adv}, {"never", Pos::adv}, {"often", Pos::adv}, {"sometimes", Pos::adv},
      {"usually", Pos::adv}, {"please", Pos::adv}, {"here", Pos::adv}, {"there", Pos::adv}, {"now", Pos::adv},
      {"not", Pos::adv}, {"again", Pos::adv}, {"together", Pos::adv},
      {"instead", Pos::adv}, {"first", Pos::adv},
      // interjections
      {"yes", Pos::intj}, {"sure", Pos::intj}, {"ok", Pos::intj}, {"okay", Pos::intj}, {"oh", Pos::intj},
      {"hello", Pos::intj}, {"hi", Pos::intj}, {"certainly", Pos::intj}, {"absolutely", Pos::intj},
      {"thanks", Pos::intj}};
  return kClosed;
}

}  // namespace

bool is_verb_base(std::string_view w) { return verbs().count(w) > 0; }

std::optional<std::string> irregular_verb(std::string_view w) {
  auto it = irregular_verbs().find(w);
  if (it == irregular_verbs().end()) return std::nullopt;
  return std::string(it->second);
}

std::optional<std::string> irregular_noun(std::string_view w) {
  auto it = irregular_nouns().find(w);
  if (it == irregular_nouns().end()) return std::nullopt;
  return std::string(it->second);
}

bool is_adjective(std::string_view w) {
  if (adjectives().count(w)) return true;
  if (w.size() > 6) {
    for (std::string_view suffix : {"ous", "ful", "less", "ive", "able", "ible"}) {
      if (w.size() > suffix.size() && w.substr(w.size() - suffix.size()) == suffix) return true;
    }
  }
  return false;
}

std::optional<Pos> closed_class(std::string_view w) {
  // "first" is an adjective inside noun phrases ("the first step"); keep that reading.
  if (w == "first") return std::nullopt;
  auto it = closed().find(w);
  if (it == closed().end()) return std::nullopt;
  return it->second;
}

bool is_subject_pronoun(std::string_view w) {
  return w == "i" || w == "you" || w == "he" || w == "she" || w == "it" || w == "we" || w == "they" ||
         w == "who" || w == "which" || w == "that";
}

bool is_object_pronoun(std::string_view w) {
  return w == "me" || w == "you" || w == "him" || w == "her" || w == "us" || w == "them";
}

bool is_discourse_opener(std::string_view w) {
  return w == "please" || w == "sure" || w == "ok" || w == "okay" || w == "certainly" || w == "absolutely" ||
         w == "now" || w == "then" || w == "first" || w == "next" || w == "finally" || w == "also" || w == "so" ||
         w == "well" || w == "just" || w == "simply" || w == "carefully" || w == "briefly" || w == "quickly";
}

}  // namespace ik::stats::lexicon
