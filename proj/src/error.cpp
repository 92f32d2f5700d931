/*
 * Copyright 2026 The pragsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pragsim/error.hpp"

namespace pragsim {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonIntegralDims: return "NonIntegralDims";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NegativeTrim: return "NegativeTrim";
        case ErrorCode::DegenerateRange: return "DegenerateRange";
        case ErrorCode::NegativeUnsupported: return "NegativeUnsupported";
        case ErrorCode::EmptyTrace: return "EmptyTrace";
        case ErrorCode::MissingProfile: return "MissingProfile";
        case ErrorCode::AllDone: return "AllDone";
        case ErrorCode::DeadlockDetected: return "DeadlockDetected";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::TraceIOError: return "TraceIOError";
        case ErrorCode::OracleMismatch: return "OracleMismatch";
    }
    return "Unknown";
}

}  // namespace pragsim
