/* Copyright 2026 The dynenclave Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Fills the buffer with 0, 1, 2, ... and returns the element count.
   Loaded before sum_array so it shows up in the map. */
int array_gen(int *a, long bytes) {
  long n = bytes / (long)sizeof(int);
  for (long i = 0; i < n; i++) a[i] = (int)i;
  return (int)n;
}
