#pragma once

#include <string>
#include <string_view>

namespace diactk {

// SHA-256 as a lowercase hex string.
std::string sha256_hex(std::string_view data);

// Digest keying a (system, user) prompt pair for the replay log. The two
// texts are joined with a 0x1E record separator so boundaries can't collide.
std::string request_digest(std::string_view system_message,
                           std::string_view user_message);

}  // namespace diactk
