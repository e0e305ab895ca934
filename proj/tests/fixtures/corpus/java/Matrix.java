package org.example.math;

import java.util.Arrays;

public class Matrix {
  private final double[][] data;
  private final int rows;
  private final int cols;

  public Matrix(int rows, int cols) {
    this.rows = rows;
    this.cols = cols;
    this.data = new double[rows][cols];
  }

  public static Matrix identity(int n) {
    Matrix m = new Matrix(n, n);
    for (int i = 0; i < n; i++) {
      m.data[i][i] = 1.0;
    }
    return m;
  }

  public double get(int r, int c) {
    return data[r][c];
  }

  public void set(int r, int c, double value) {
    data[r][c] = value;
  }

  public Matrix multiply(Matrix other) {
    if (cols != other.rows) {
      throw new IllegalArgumentException("shape mismatch");
    }
    Matrix out = new Matrix(rows, other.cols);
    for (int i = 0; i < rows; i++) {
      for (int j = 0; j < other.cols; j++) {
        double sum = 0.0;
        for (int k = 0; k < cols; k++) {
          sum += data[i][k] * other.data[k][j];
        }
        out.data[i][j] = sum;
      }
    }
    return out;
  }

  public Matrix transpose() {
    Matrix t = new Matrix(cols, rows);
    for (int i = 0; i < rows; i++) {
      for (int j = 0; j < cols; j++) {
        t.data[j][i] = data[i][j];
      }
    }
    return t;
  }

  public double trace() {
    double sum = 0.0;
    int n = Math.min(rows, cols);
    for (int i = 0; i < n; i++) {
      sum += data[i][i];
    }
    return sum;
  }

  public Matrix scale(double factor) {
    Matrix out = new Matrix(rows, cols);
    for (int i = 0; i < rows; i++) {
      for (int j = 0; j < cols; j++) {
        out.data[i][j] = data[i][j] * factor;
      }
    }
    return out;
  }

  public double frobeniusNorm() {
    double sum = 0.0;
    for (double[] row : data) {
      for (double v : row) {
        sum += v * v;
      }
    }
    return Math.sqrt(sum);
  }

  public boolean isSymmetric(double tolerance) {
    if (rows != cols) {
      return false;
    }
    for (int i = 0; i < rows; i++) {
      for (int j = i + 1; j < cols; j++) {
        if (Math.abs(data[i][j] - data[j][i]) > tolerance) {
          return false;
        }
      }
    }
    return true;
  }

  public double[] rowSums() {
    double[] sums = new double[rows];
    for (int i = 0; i < rows; i++) {
      double s = 0;
      for (int j = 0; j < cols; j++) {
        s += data[i][j];
      }
      sums[i] = s;
    }
    return sums;
  }

  public int argmaxRow(int r) {
    int best = 0;
    for (int j = 1; j < cols; j++) {
      if (data[r][j] > data[r][best]) {
        best = j;
      }
    }
    return best;
  }

  @Override
  public String toString() {
    StringBuilder sb = new StringBuilder();
    for (double[] row : data) {
      sb.append(Arrays.toString(row)).append('\n');
    }
    return sb.toString();
  }

  public static double dot(double[] u, double[] v) {
    double acc = 0.0;
    for (int i = 0; i < u.length; i++) {
      acc += u[i] * v[i];
    }
    return acc;
  }

  public static double clamp(double value, double low, double high) {
    if (value < low) {
      return low;
    }
    return value > high ? high : value;
  }

  public static double lerp(double a, double b, double t) {
    return a + (b - a) * t;
  }
}
