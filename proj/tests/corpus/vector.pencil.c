void fill(int n, int my_vector[restrict const static n])
{
  int i;
  for (i = 0; i < n; i++) {
    my_vector[i] = 0;
  }
}
