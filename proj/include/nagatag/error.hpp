#pragma once

#include <stdexcept>
#include <string>

namespace nagatag {

/// Raised for malformed or inconsistent input data (corpus, model, tagset files).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nagatag
