#include "riskvec/text.hpp"

#include <algorithm>
#include <set>

#include "riskvec/io.hpp"

namespace riskvec::text {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_handle_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

bool ieq_prefix(std::string_view chunk, std::string_view prefix) {
  if (chunk.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char a = chunk[i];
    if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
    if (a != prefix[i]) return false;
  }
  return true;
}

bool looks_like_url(std::string_view chunk) {
  return ieq_prefix(chunk, "http://") || ieq_prefix(chunk, "https://") ||
         ieq_prefix(chunk, "www.");
}

template <typename Fn>
void for_each_chunk(std::string_view text, Fn fn) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) fn(text.substr(start, i - start));
  }
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  for_each_chunk(text, [&](std::string_view chunk) {
    if (looks_like_url(chunk)) return;
    if (chunk.front() == '@') return;
    if (chunk.front() == '#') {
      std::size_t end = 1;
      while (end < chunk.size() && is_handle_char(chunk[end])) ++end;
      if (end > 1) {
        std::string word(chunk.substr(1, end - 1));
        std::transform(word.begin(), word.end(), word.begin(), [](char c) {
          return c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c;
        });
        out.push_back(Token{std::move(word), true});
      }
      return;
    }
    for (auto& word : io::split_tokens(chunk))
      out.push_back(Token{std::move(word), false});
  });
  return out;
}

std::vector<std::string> hashtags(std::string_view text) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (auto& tok : tokenize(text))
    if (tok.is_hashtag && seen.insert(tok.value).second)
      out.push_back(tok.value);
  return out;
}

std::vector<std::string> mentions(std::string_view text) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for_each_chunk(text, [&](std::string_view chunk) {
    if (chunk.front() != '@' || looks_like_url(chunk)) return;
    std::size_t end = 1;
    while (end < chunk.size() && is_handle_char(chunk[end])) ++end;
    if (end > 1) {
      std::string handle(chunk.substr(1, end - 1));
      if (seen.insert(handle).second) out.push_back(std::move(handle));
    }
  });
  return out;
}

}  // namespace riskvec::text
