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

#include <stdlib.h>

int array_gen(int *a, long bytes);

/* Sums an in-enclave array of mib MiB of ints; returns n(n-1)/2, or -1. */
long sum_array(long mib) {
  long n = mib * (1024L * 1024L / (long)sizeof(int));
  int *a = malloc(n * sizeof(int));
  if (!a) return -1;
  array_gen(a, n * (long)sizeof(int));
  long s = 0;
  for (long i = 0; i < n; i++) s += a[i];
  free(a);
  return s;
}
