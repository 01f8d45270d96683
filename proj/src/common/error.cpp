#include "scc/common/error.hpp"

namespace scc {

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::usage: return 2;
        case ErrorKind::data: return 3;
        case ErrorKind::remote: return 4;
    }
    return 1;
}

}  // namespace scc
