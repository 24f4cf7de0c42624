#include "qbattery/error.hpp"

namespace qbattery {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidSpec: return "invalid-spec";
        case ErrorKind::InvalidPair: return "invalid-pair";
        case ErrorKind::InvalidGrid: return "invalid-grid";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::InsufficientData: return "insufficient-data";
        case ErrorKind::Capacity: return "capacity";
        case ErrorKind::Config: return "config";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

}  // namespace qbattery
