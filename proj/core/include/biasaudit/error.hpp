// core/include/biasaudit/error.hpp

// Copyright 2026  The biasaudit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef BIASAUDIT_ERROR_HPP_
#define BIASAUDIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace biasaudit {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Manifest / corpus loading.
class FileNotFoundError : public Error { using Error::Error; };
class ManifestParseError : public Error { using Error::Error; };
class DuplicateSpeakerError : public Error { using Error::Error; };
class UnknownGroupError : public Error { using Error::Error; };
class EmptyManifestError : public Error { using Error::Error; };

// WAV reading.
class WavFormatError : public Error { using Error::Error; };
class WrongSampleRateError : public WavFormatError { using WavFormatError::WavFormatError; };
class WrongChannelCountError : public WavFormatError { using WavFormatError::WavFormatError; };
class WrongBitDepthError : public WavFormatError { using WavFormatError::WavFormatError; };
class TruncatedWavError : public WavFormatError { using WavFormatError::WavFormatError; };

// Numeric / shape preconditions.
class InvalidArgumentError : public Error { using Error::Error; };
class SignalTooShortError : public Error { using Error::Error; };
class DimensionMismatchError : public Error { using Error::Error; };

// Training / evaluation.
class SingleClassError : public Error { using Error::Error; };
class ProtocolError : public Error { using Error::Error; };

class IoError : public Error { using Error::Error; };

}  // namespace biasaudit

#endif  // BIASAUDIT_ERROR_HPP_
