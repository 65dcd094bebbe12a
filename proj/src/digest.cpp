#include "asthmon/digest.hpp"

#include <fstream>
#include <sstream>

#include "asthmon/error.hpp"

namespace asthmon {

std::string file_digest_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for digest");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return fnv1a64_hex(buffer.str());
}

}  // namespace asthmon
