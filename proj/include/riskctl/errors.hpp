/*
 Copyright 2026 riskctl contributors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef RISKCTL_ERRORS_HPP
#define RISKCTL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace riskctl {

/// Base for all library errors. CLI maps ConfigError to exit code 2 and
/// NumericalError to exit code 3.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(what) {}
};

// model
class NoCompatibleLambda : public NumericalError {
public:
    explicit NoCompatibleLambda(const std::string& what) : NumericalError(what) {}
};
class OutsideDomain : public NumericalError {
public:
    explicit OutsideDomain(const std::string& what) : NumericalError(what) {}
};

// simulate
class InvalidStart : public NumericalError {
public:
    explicit InvalidStart(const std::string& what) : NumericalError(what) {}
};
class NonpositiveStep : public NumericalError {
public:
    explicit NonpositiveStep(const std::string& what) : NumericalError(what) {}
};

// fdm
class InsufficientNodes : public NumericalError {
public:
    explicit InsufficientNodes(const std::string& what) : NumericalError(what) {}
};
class StepFailure : public NumericalError {
public:
    explicit StepFailure(const std::string& what) : NumericalError(what) {}
};
class PositivityLoss : public NumericalError {
public:
    explicit PositivityLoss(const std::string& what) : NumericalError(what) {}
};
class LinearSolveFailure : public NumericalError {
public:
    explicit LinearSolveFailure(const std::string& what) : NumericalError(what) {}
};

// policy
class TimeOutOfRange : public NumericalError {
public:
    explicit TimeOutOfRange(const std::string& what) : NumericalError(what) {}
};

// pathint
class DegenerateWeights : public NumericalError {
public:
    explicit DegenerateWeights(const std::string& what) : NumericalError(what) {}
};

// cli
class MissingArtifact : public ConfigError {
public:
    explicit MissingArtifact(const std::string& what) : ConfigError(what) {}
};

} // namespace riskctl

#endif // RISKCTL_ERRORS_HPP
