#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace riskvec::text {

struct Token {
  std::string value;  // lowercase
  bool is_hashtag = false;
};

// Splits post text into lowercase word tokens. Chunks that look like URLs
// and @mentions are dropped entirely; "#word" yields the bare word flagged
// as a hashtag. Bytes >= 0x80 count as word characters, which keeps UTF-8
// words intact.
std::vector<Token> tokenize(std::string_view text);

// Hashtag words, lowercase, first occurrence order, deduplicated.
std::vector<std::string> hashtags(std::string_view text);

// @mention handles as typed (case preserved), first occurrence order,
// deduplicated.
std::vector<std::string> mentions(std::string_view text);

}  // namespace riskvec::text
