// Copyright 2026 The boltzdrift Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef BOLTZDRIFT_VERSION_HPP
#define BOLTZDRIFT_VERSION_HPP

namespace boltzdrift {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace boltzdrift

#endif  // BOLTZDRIFT_VERSION_HPP
