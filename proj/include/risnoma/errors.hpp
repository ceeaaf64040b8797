// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISNOMA_ERRORS_HPP
#define RISNOMA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace risnoma
{

// Invalid scenario or system configuration. The CLI maps this to exit code 2.
class config_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to converge. The CLI maps this to exit code 3.
class numerical_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace risnoma

#endif
