#include "dco/dsl.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace dco {

namespace {

struct Token {
  enum Kind {
    Ident,
    Number,
    String,
    Colon,
    Arrow,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    End
  };
  Kind kind = End;
  std::string text;
  SourceSpan span;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Tokenizes one line; bad characters produce an error and stop the line.
std::vector<Token> lex_line(const std::string& line, int line_no,
                            std::vector<ParseError>& errors) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    SourceSpan span{line_no, static_cast<int>(i) + 1, 1};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < line.size() && ident_char(line[j])) ++j;
      span.length = static_cast<int>(j - i);
      tokens.push_back(Token{Token::Ident, line.substr(i, j - i), span});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() &&
             std::isdigit(static_cast<unsigned char>(line[j])))
        ++j;
      span.length = static_cast<int>(j - i);
      tokens.push_back(Token{Token::Number, line.substr(i, j - i), span});
      i = j;
    } else if (c == '"') {
      std::size_t j = line.find('"', i + 1);
      if (j == std::string::npos) {
        errors.push_back(ParseError{span, "unterminated string literal"});
        return tokens;
      }
      span.length = static_cast<int>(j - i + 1);
      tokens.push_back(
          Token{Token::String, line.substr(i + 1, j - i - 1), span});
      i = j + 1;
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      span.length = 2;
      tokens.push_back(Token{Token::Arrow, "->", span});
      i += 2;
    } else if (c == ':') {
      tokens.push_back(Token{Token::Colon, ":", span});
      ++i;
    } else if (c == '{') {
      tokens.push_back(Token{Token::LBrace, "{", span});
      ++i;
    } else if (c == '}') {
      tokens.push_back(Token{Token::RBrace, "}", span});
      ++i;
    } else if (c == '(') {
      tokens.push_back(Token{Token::LParen, "(", span});
      ++i;
    } else if (c == ')') {
      tokens.push_back(Token{Token::RParen, ")", span});
      ++i;
    } else if (c == ',') {
      tokens.push_back(Token{Token::Comma, ",", span});
      ++i;
    } else {
      errors.push_back(
          ParseError{span, std::string("unexpected character '") + c + "'"});
      return tokens;
    }
  }
  return tokens;
}

const char* kUnsupportedKeywords[] = {"par",    "strict", "neg",
                                      "break",  "seq",    "critical",
                                      "ignore", "consider"};

class Parser {
 public:
  explicit Parser(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int no = 1;
    while (std::getline(in, line)) lines_.push_back({no++, line});
  }

  ParseResult run() {
    Scenario s = make_scenario("");
    parse_header(s);

    // Block stack: each entry is the list currently receiving fragments.
    struct Block {
      enum Kind { Alt, Opt, Loop } kind;
      AltNode alt;
      LoopNode loop;
      SourceSpan open_span;
    };
    std::vector<Fragment> top;
    std::vector<std::vector<Fragment>> list_stack;
    std::vector<Block> block_stack;
    auto current_list = [&]() -> std::vector<Fragment>& {
      return list_stack.empty() ? top : list_stack.back();
    };

    for (; cursor_ < lines_.size(); ++cursor_) {
      auto tokens = lex_line(lines_[cursor_].second, lines_[cursor_].first,
                             errors_);
      if (tokens.empty()) continue;
      const Token& head = tokens[0];

      if (head.kind == Token::Ident && head.text == "lifeline") {
        errors_.push_back(
            ParseError{head.span, "lifeline declared after the body"});
        continue;
      }
      if (head.kind == Token::Ident && head.text == "alt") {
        expect_open_brace(tokens, 1);
        block_stack.push_back(Block{Block::Alt, {}, {}, head.span});
        list_stack.emplace_back();
        continue;
      }
      if (head.kind == Token::Ident && head.text == "opt") {
        expect_open_brace(tokens, 1);
        block_stack.push_back(Block{Block::Opt, {}, {}, head.span});
        list_stack.emplace_back();
        continue;
      }
      if (head.kind == Token::Ident && head.text == "loop") {
        LoopNode loop;
        parse_loop_header(tokens, loop);
        Block b{Block::Loop, {}, {}, head.span};
        b.loop = loop;
        block_stack.push_back(std::move(b));
        list_stack.emplace_back();
        continue;
      }
      if (head.kind == Token::RBrace) {
        if (block_stack.empty()) {
          errors_.push_back(ParseError{head.span, "unmatched '}'"});
          continue;
        }
        bool else_follows = tokens.size() >= 3 &&
                            tokens[1].kind == Token::Ident &&
                            tokens[1].text == "else" &&
                            tokens[2].kind == Token::LBrace;
        if (tokens.size() > 1 && !else_follows)
          errors_.push_back(
              ParseError{tokens[1].span, "unexpected tokens after '}'"});
        Block& b = block_stack.back();
        if (else_follows) {
          if (b.kind != Block::Alt) {
            errors_.push_back(
                ParseError{tokens[1].span, "'else' outside an alt block"});
          }
          b.alt.operands.push_back(std::move(list_stack.back()));
          list_stack.back().clear();
          continue;
        }
        std::vector<Fragment> body = std::move(list_stack.back());
        list_stack.pop_back();
        Fragment done;
        if (b.kind == Block::Loop) {
          b.loop.body = std::move(body);
          done = Fragment{std::move(b.loop)};
        } else if (b.kind == Block::Opt) {
          AltNode alt;
          alt.operands.push_back(std::move(body));
          alt.operands.emplace_back();  // the skip operand
          done = Fragment{std::move(alt)};
        } else {
          b.alt.operands.push_back(std::move(body));
          done = Fragment{std::move(b.alt)};
        }
        block_stack.pop_back();
        current_list().push_back(std::move(done));
        continue;
      }
      if (head.kind == Token::Ident) {
        bool unsupported = false;
        for (const char* kw : kUnsupportedKeywords)
          if (head.text == kw) {
            errors_.push_back(ParseError{
                head.span, "unsupported fragment '" + head.text + "'"});
            unsupported = true;
            break;
          }
        if (unsupported) continue;
        parse_message_line(tokens, s, current_list());
        continue;
      }
      errors_.push_back(ParseError{head.span, "expected a declaration"});
    }

    for (auto it = block_stack.rbegin(); it != block_stack.rend(); ++it)
      errors_.push_back(ParseError{it->open_span, "unclosed block"});

    s.body = Fragment{SeqNode{std::move(top)}};

    if (errors_.empty()) {
      // The grammar-level checks above should leave nothing for this to
      // find; it is the final gate for "parsing never accepts what
      // validation rejects".
      for (const auto& d : validate_scenario(s))
        errors_.push_back(ParseError{SourceSpan{1, 1, 0}, d});
    }

    ParseResult result;
    if (errors_.empty()) result.scenario = std::move(s);
    result.errors = std::move(errors_);
    return result;
  }

 private:
  void parse_header(Scenario& s) {
    bool have_name = false;
    for (; cursor_ < lines_.size(); ++cursor_) {
      auto tokens = lex_line(lines_[cursor_].second, lines_[cursor_].first,
                             errors_);
      if (tokens.empty()) continue;
      const Token& head = tokens[0];
      if (!have_name) {
        if (head.kind == Token::Ident && head.text == "scenario" &&
            tokens.size() == 2 && tokens[1].kind == Token::Ident) {
          s.name = tokens[1].text;
          have_name = true;
          continue;
        }
        errors_.push_back(
            ParseError{head.span, "expected 'scenario <name>' first"});
        have_name = true;  // avoid cascading
        continue;
      }
      if (head.kind == Token::Ident && head.text == "lifeline") {
        if (tokens.size() < 2 || tokens[1].kind != Token::Ident) {
          errors_.push_back(ParseError{head.span, "expected 'lifeline <id>'"});
          continue;
        }
        Lifeline l;
        l.id = tokens[1].text;
        if (tokens.size() >= 3 && tokens[2].kind == Token::String)
          l.display_name = tokens[2].text;
        else if (tokens.size() >= 3)
          errors_.push_back(ParseError{tokens[2].span,
                                       "expected a quoted display name"});
        if (declared_lifelines_.count(l.id))
          errors_.push_back(ParseError{tokens[1].span,
                                       "duplicate lifeline id " + l.id});
        declared_lifelines_.insert(l.id);
        s.lifelines.push_back(std::move(l));
        continue;
      }
      return;  // body begins at the current line
    }
  }

  void expect_open_brace(const std::vector<Token>& tokens, std::size_t at) {
    if (tokens.size() <= at || tokens[at].kind != Token::LBrace)
      errors_.push_back(ParseError{tokens[0].span, "expected '{'"});
  }

  void parse_loop_header(const std::vector<Token>& tokens, LoopNode& loop) {
    // loop ( min , max ) {
    if (tokens.size() < 7 || tokens[1].kind != Token::LParen ||
        tokens[2].kind != Token::Number || tokens[3].kind != Token::Comma ||
        tokens[4].kind != Token::Number || tokens[5].kind != Token::RParen ||
        tokens[6].kind != Token::LBrace) {
      errors_.push_back(
          ParseError{tokens[0].span, "expected 'loop(<min>,<max>) {'"});
      return;
    }
    loop.min = static_cast<unsigned>(std::stoul(tokens[2].text));
    loop.max = static_cast<unsigned>(std::stoul(tokens[4].text));
    if (loop.min > loop.max)
      errors_.push_back(ParseError{tokens[2].span,
                                   "loop min exceeds loop max"});
  }

  void parse_message_line(const std::vector<Token>& tokens, Scenario& s,
                          std::vector<Fragment>& list) {
    std::size_t at = 0;
    bool coord = false;
    if (tokens[at].kind == Token::Ident && tokens[at].text == "coord") {
      coord = true;
      ++at;
    }
    if (tokens.size() < at + 5 || tokens[at].kind != Token::Ident ||
        tokens[at + 1].kind != Token::Colon ||
        tokens[at + 2].kind != Token::Ident ||
        tokens[at + 3].kind != Token::Arrow ||
        tokens[at + 4].kind != Token::Ident) {
      errors_.push_back(ParseError{tokens[0].span,
                                   "expected '<name>: <from> -> <to>'"});
      return;
    }
    const Token& name = tokens[at];
    const Token& from = tokens[at + 2];
    const Token& to = tokens[at + 4];

    if (declared_messages_.count(name.text))
      errors_.push_back(
          ParseError{name.span, "duplicate message name " + name.text});
    declared_messages_.insert(name.text);
    if (!declared_lifelines_.count(from.text))
      errors_.push_back(
          ParseError{from.span, "undeclared lifeline " + from.text});
    if (!declared_lifelines_.count(to.text))
      errors_.push_back(ParseError{to.span, "undeclared lifeline " + to.text});
    if (from.text == to.text)
      errors_.push_back(ParseError{
          name.span, "sender equals receiver for " + name.text});
    if (coord && !is_coordination_name(name.text))
      errors_.push_back(ParseError{
          name.span, "coordination message " + name.text +
                         " must be named Ctrl<k>"});
    if (!coord && is_coordination_name(name.text))
      errors_.push_back(ParseError{
          name.span,
          "message " + name.text + " uses a reserved coordination name"});

    s.messages.push_back(MessageDecl{name.text, from.text, to.text, coord});
    list.push_back(Fragment{MsgNode{name.text}});
  }

  std::vector<std::pair<int, std::string>> lines_;
  std::size_t cursor_ = 0;
  std::vector<ParseError> errors_;
  std::set<std::string> declared_lifelines_;
  std::set<std::string> declared_messages_;
};

void render_list(const std::vector<Fragment>& items, const Scenario& s,
                 int depth, std::string& out);

void render_fragment(const Fragment& f, const Scenario& s, int depth,
                     std::string& out) {
  std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  if (const auto* m = std::get_if<MsgNode>(&f.node)) {
    const MessageDecl* decl = find_message(s, m->message);
    out += indent;
    if (decl->is_coordination) out += "coord ";
    out += decl->name + ": " + decl->sender + " -> " + decl->receiver + "\n";
  } else if (const auto* seq = std::get_if<SeqNode>(&f.node)) {
    render_list(seq->items, s, depth, out);
  } else if (const auto* alt = std::get_if<AltNode>(&f.node)) {
    bool as_opt = alt->operands.size() == 2 && alt->operands[1].empty();
    if (as_opt) {
      out += indent + "opt {\n";
      render_list(alt->operands[0], s, depth + 1, out);
      out += indent + "}\n";
      return;
    }
    for (std::size_t i = 0; i < alt->operands.size(); ++i) {
      out += indent + (i == 0 ? "alt {" : "} else {") + "\n";
      render_list(alt->operands[i], s, depth + 1, out);
    }
    out += indent + "}\n";
  } else {
    const auto& loop = std::get<LoopNode>(f.node);
    out += indent + "loop(" + std::to_string(loop.min) + "," +
           std::to_string(loop.max) + ") {\n";
    render_list(loop.body, s, depth + 1, out);
    out += indent + "}\n";
  }
}

void render_list(const std::vector<Fragment>& items, const Scenario& s,
                 int depth, std::string& out) {
  for (const auto& f : items) render_fragment(f, s, depth, out);
}

}  // namespace

ParseResult parse_scenario(const std::string& text) {
  return Parser(text).run();
}

std::string render_scenario(const Scenario& s) {
  std::string out = "scenario " + s.name + "\n";
  for (const auto& l : s.lifelines) {
    out += "lifeline " + l.id;
    if (!l.display_name.empty()) out += " \"" + l.display_name + "\"";
    out += "\n";
  }
  const auto& seq = std::get<SeqNode>(s.body.node);
  render_list(seq.items, s, 0, out);
  return out;
}

}  // namespace dco
