#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "arbor/presentation.hpp"

namespace arbor {

std::string_view to_string(ParseError::Kind kind) {
  switch (kind) {
    case ParseError::Kind::syntax: return "syntax error";
    case ParseError::Kind::bad_multiplicity: return "bad multiplicity";
    case ParseError::Kind::undefined_state: return "undefined state";
    case ParseError::Kind::duplicate_state: return "duplicate state";
    case ParseError::Kind::no_root: return "no root";
  }
  return "unknown";
}

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& detail)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " +
                         std::string(to_string(kind)) + (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      line_(line),
      column_(column) {}

bool ParseError::is_validation() const noexcept {
  return kind_ == Kind::undefined_state || kind_ == Kind::duplicate_state || kind_ == Kind::no_root;
}

namespace {

struct Token {
  enum Type { word, number, lbrace, rbrace, colon, comma, end } type;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_blank();
    Token tok{Token::end, "", line_, column_};
    if (pos_ >= text_.size()) return tok;
    char c = text_[pos_];
    auto single = [&](Token::Type t) {
      tok.type = t;
      tok.text = std::string(1, c);
      advance();
      return tok;
    };
    switch (c) {
      case '{': return single(Token::lbrace);
      case '}': return single(Token::rbrace);
      case ':': return single(Token::colon);
      case ',': return single(Token::comma);
      default: break;
    }
    auto word_char = [](char ch) {
      return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
             ch == '_' || ch == '-' || ch == '+';
    };
    if (!word_char(c)) {
      throw ParseError(ParseError::Kind::syntax, line_, column_,
                       "unexpected character '" + std::string(1, c) + "'");
    }
    while (pos_ < text_.size() && word_char(text_[pos_])) {
      tok.text += text_[pos_];
      advance();
    }
    bool numeric = !tok.text.empty() && (tok.text[0] >= '0' && tok.text[0] <= '9');
    tok.type = numeric || tok.text[0] == '-' || tok.text[0] == '+' ? Token::number : Token::word;
    return tok;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

struct RawSlot {
  std::string child;
  Multiplicity multiplicity;
  std::size_t line, column;
};

struct RawState {
  std::string name;
  std::vector<RawSlot> slots;
  std::size_t line, column;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { cur_ = lexer_.next(); }

  TreePresentation parse() {
    while (cur_.type != Token::end) {
      if (cur_.type == Token::word && cur_.text == "state") {
        parse_state();
      } else if (cur_.type == Token::word && cur_.text == "root") {
        if (root_) syntax("second root declaration");
        advance();
        root_ = expect_name("root state name");
      } else {
        syntax("expected 'state' or 'root', found '" + cur_.text + "'");
      }
    }
    return build();
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  [[noreturn]] void syntax(const std::string& detail) {
    throw ParseError(ParseError::Kind::syntax, cur_.line, cur_.column, detail);
  }

  Token expect_name(const char* what) {
    if (cur_.type != Token::word || !is_identifier(cur_.text) || cur_.text == "state" ||
        cur_.text == "root") {
      syntax(std::string("expected ") + what);
    }
    Token t = cur_;
    advance();
    return t;
  }

  void expect(Token::Type type, const char* what) {
    if (cur_.type != type) syntax(std::string("expected ") + what);
    advance();
  }

  Multiplicity parse_multiplicity() {
    Token t = cur_;
    if (t.type == Token::word && t.text == "w") {
      advance();
      return Multiplicity::omega();
    }
    if (t.type == Token::end || t.type == Token::lbrace || t.type == Token::rbrace ||
        t.type == Token::colon || t.type == Token::comma) {
      syntax("expected multiplicity");
    }
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size() || value == 0) {
      throw ParseError(ParseError::Kind::bad_multiplicity, t.line, t.column,
                       "'" + t.text + "' is not a positive integer or 'w'");
    }
    advance();
    return Multiplicity::finite(value);
  }

  void parse_state() {
    advance();
    Token name = expect_name("state name");
    RawState st{name.text, {}, name.line, name.column};
    expect(Token::lbrace, "'{'");
    while (cur_.type != Token::rbrace) {
      if (cur_.type == Token::comma) {
        advance();
        continue;
      }
      Token child = expect_name("child state name or '}'");
      expect(Token::colon, "':'");
      st.slots.push_back({child.text, parse_multiplicity(), child.line, child.column});
    }
    advance();
    states_.push_back(std::move(st));
  }

  TreePresentation build() {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      const auto& st = states_[i];
      if (!index.emplace(st.name, i).second) {
        throw ParseError(ParseError::Kind::duplicate_state, st.line, st.column, st.name);
      }
    }
    std::vector<State> states;
    for (const auto& st : states_) {
      State s{st.name, {}};
      for (const auto& slot : st.slots) {
        auto it = index.find(slot.child);
        if (it == index.end()) {
          throw ParseError(ParseError::Kind::undefined_state, slot.line, slot.column, slot.child);
        }
        s.slots.push_back({it->second, slot.multiplicity});
      }
      states.push_back(std::move(s));
    }
    if (!root_) throw ParseError(ParseError::Kind::no_root, cur_.line, cur_.column, "");
    auto it = index.find(root_->text);
    if (it == index.end()) {
      throw ParseError(ParseError::Kind::undefined_state, root_->line, root_->column, root_->text);
    }
    return {std::move(states), it->second};
  }

  Lexer lexer_;
  Token cur_;
  std::vector<RawState> states_;
  std::optional<Token> root_;
};

}  // namespace

TreePresentation parse_dsl(std::string_view text) { return Parser(text).parse(); }

TreePresentation read_presentation_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dsl(buf.str());
}

std::string serialize(const TreePresentation& p) {
  std::string out;
  for (const auto& s : p.states()) {
    out += "state " + s.name + " {";
    for (const auto& slot : s.slots) {
      out += " " + p.name(slot.state) + ":" + slot.multiplicity.to_string();
    }
    out += " } ";
  }
  out += "root " + p.name(p.root()) + "\n";
  return out;
}

}  // namespace arbor
